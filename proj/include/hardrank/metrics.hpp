#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "hardrank/types.hpp"

namespace hardrank {

enum class Gain { exponential, linear };

struct MetricOptions {
    std::size_t ndcg_k = 10;
    Gain gain = Gain::exponential;
    // 0 means the full list
    std::size_t rr_cutoff = 0;
    int rel_threshold = 1;
    // Queries without any positive judgment score 0; they are left out of
    // means unless this is set.
    bool include_no_positive = false;
};

double gain_of(int grade, Gain gain);

/// DCG@k with gain 2^g - 1 (or g) and discount log2(rank + 1), divided by the
/// DCG@k of the ideal ordering of all judged documents. 0 when the query has
/// no positive judgment.
double ndcg_at_k(const RankedList& ranking, const Qrels& qrels, const std::string& query_id, std::size_t k = 10,
                 Gain gain = Gain::exponential);

/// 1 / rank of the first document with grade >= rel_threshold within the
/// cutoff (0 = whole list); 0 if there is none.
double reciprocal_rank(const RankedList& ranking, const Qrels& qrels, const std::string& query_id,
                       std::size_t cutoff = 0, int rel_threshold = 1);

struct QueryMetrics {
    double ndcg = 0.0;
    double rr = 0.0;

    friend bool operator==(const QueryMetrics&, const QueryMetrics&) = default;
};

/// Query ids the means are taken over: every judged query, minus those
/// without a positive judgment unless include_no_positive is set.
std::vector<std::string> evaluation_queries(const Qrels& qrels, const MetricOptions& options);

/// Per-query metrics for `query_ids`; a query absent from the run scores 0.
/// Parallel across queries.
std::map<std::string, QueryMetrics> evaluate_run(const RunList& run, const Qrels& qrels,
                                                 std::span<const std::string> query_ids, const MetricOptions& options);
std::map<std::string, QueryMetrics> evaluate_run_serial(const RunList& run, const Qrels& qrels,
                                                        std::span<const std::string> query_ids,
                                                        const MetricOptions& options);

} // namespace hardrank
