#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hardrank/types.hpp"

namespace hardrank {

struct Bm25Params {
    double k1 = 0.9;
    double b = 0.4;

    /// Throws InputError unless k1 > 0 and b in [0,1].
    void validate() const;
};

struct Posting {
    std::uint32_t doc = 0;
    std::uint32_t tf = 0;

    friend bool operator==(const Posting&, const Posting&) = default;
};

/// Term -> (doc, tf) postings with per-document lengths. Immutable once
/// built; safe to search from many threads.
class InvertedIndex {
public:
    static constexpr std::string_view kFormatHeader = "hardrank-index v1";

    InvertedIndex() = default;

    /// Throws InputError on an empty corpus and DuplicateError on repeated doc_id.
    static InvertedIndex build(std::span<const Document> corpus);

    std::size_t num_docs() const { return doc_ids_.size(); }
    double avg_doc_length() const { return avg_length_; }
    std::uint32_t doc_length(std::uint32_t doc) const { return lengths_[doc]; }
    const std::string& doc_id(std::uint32_t doc) const { return doc_ids_[doc]; }
    std::optional<std::uint32_t> internal_id(const std::string& doc_id) const;

    /// Postings sorted by internal doc id; nullptr for unknown terms.
    const std::vector<Posting>* postings(const std::string& term) const;
    std::size_t doc_freq(const std::string& term) const;
    std::uint32_t term_frequency(const std::string& term, std::uint32_t doc) const;
    std::size_t num_terms() const { return postings_.size(); }

    /// Robertson-Sparck Jones idf ln((N - df + 0.5) / (df + 0.5)), floored at 0.
    double idf(const std::string& term) const;

    void save(std::ostream& out) const;
    static InvertedIndex load(std::istream& in);
    void save(const std::filesystem::path& path) const;
    static InvertedIndex load(const std::filesystem::path& path);

    friend bool operator==(const InvertedIndex& a, const InvertedIndex& b)
    {
        return a.doc_ids_ == b.doc_ids_ && a.lengths_ == b.lengths_ && a.postings_ == b.postings_;
    }

private:
    void finish();

    std::vector<std::string> doc_ids_;
    std::vector<std::uint32_t> lengths_;
    std::unordered_map<std::string, std::vector<Posting>> postings_;
    std::unordered_map<std::string, std::uint32_t> id_lookup_;
    double avg_length_ = 0.0;
};

inline InvertedIndex build_index(std::span<const Document> corpus) { return InvertedIndex::build(corpus); }

/// Distinct query terms in first-occurrence order.
std::vector<std::string> distinct_terms(std::string_view text);

/// BM25 of one document for the given distinct terms.
double bm25_score(const InvertedIndex& index, std::span<const std::string> terms, std::uint32_t doc,
                  const Bm25Params& params);

/// Top-k documents by BM25; zero-score documents are dropped; ties by doc_id.
RankedList bm25_search(const InvertedIndex& index, const Query& query, std::size_t k, const Bm25Params& params);

/// First-stage retrieval for a query batch, parallel across queries.
RunList search_all(const InvertedIndex& index, std::span<const Query> queries, std::size_t k,
                   const Bm25Params& params, const std::string& tag = "bm25");
/// Single-threaded reference for search_all.
RunList search_all_serial(const InvertedIndex& index, std::span<const Query> queries, std::size_t k,
                          const Bm25Params& params, const std::string& tag = "bm25");

} // namespace hardrank
