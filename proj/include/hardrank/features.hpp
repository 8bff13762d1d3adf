#pragma once

#include <array>
#include <cstddef>
#include <string_view>

#include "hardrank/index.hpp"
#include "hardrank/types.hpp"

namespace hardrank {

/// Query-document features fed to the pointwise ranker, in this order.
enum class RankerFeature : std::size_t {
    bm25 = 0,
    // distinct query terms present in the doc / distinct query terms
    overlap_ratio,
    // cosine between raw term-frequency vectors
    tf_cosine,
    // query token count
    query_length,
    // ln(1 + doc token count)
    log_doc_length,
    // distinct query terms among the first 20 doc tokens / distinct query terms
    lead_coverage,
};

inline constexpr std::size_t kRankerFeatureDim = 6;
inline constexpr std::size_t kLeadTokens = 20;

using FeatureVector = std::array<double, kRankerFeatureDim>;

inline double feature(const FeatureVector& f, RankerFeature which) { return f[static_cast<std::size_t>(which)]; }

/// Throws InputError if `doc` is not in `index`.
FeatureVector extract_features(std::string_view query_text, const Document& doc, const InvertedIndex& index,
                               const Bm25Params& params);

} // namespace hardrank
