#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace hardrank {

struct Document {
    std::string doc_id;
    std::string text;
    // Optional pre-segmented passages; each is a verbatim span of `text`.
    std::vector<std::string> passages;

    friend bool operator==(const Document&, const Document&) = default;
};

enum class Hardness { unknown, easy, hard };

struct Query {
    std::string query_id;
    std::string text;
    Hardness hardness = Hardness::unknown;

    friend bool operator==(const Query&, const Query&) = default;
};

struct RunRecord {
    std::string doc_id;
    double score = 0.0;
    int rank = 0;

    friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

/// One query's ranked list. Ranks are 1..n, scores non-increasing,
/// equal scores ordered by doc_id ascending.
using RankedList = std::vector<RunRecord>;

struct RunList {
    std::string tag;
    std::map<std::string, RankedList> queries;

    friend bool operator==(const RunList&, const RunList&) = default;

    const RankedList* find(const std::string& query_id) const {
        auto it = queries.find(query_id);
        return it == queries.end() ? nullptr : &it->second;
    }
};

/// Sort by score descending (doc_id ascending on ties) and rewrite ranks 1..n.
void sort_and_rank(RankedList& list);

/// Throws InputError if `list` violates the RankedList invariants.
void check_ranked_list(const RankedList& list);

/// Documents addressable by doc_id.
class DocumentStore {
public:
    DocumentStore() = default;
    /// Throws DuplicateError on a repeated doc_id.
    explicit DocumentStore(std::vector<Document> docs);

    const Document* find(const std::string& doc_id) const;
    /// Throws InputError naming the missing doc_id.
    const Document& at(const std::string& doc_id) const;
    const std::vector<Document>& docs() const { return docs_; }
    std::size_t size() const { return docs_.size(); }

private:
    std::vector<Document> docs_;
    std::unordered_map<std::string, std::size_t> by_id_;
};

class Qrels {
public:
    /// Throws DuplicateError when (query_id, doc_id) is already judged and
    /// InputError when grade < 0.
    void add(const std::string& query_id, const std::string& doc_id, int grade);

    std::optional<int> grade(const std::string& query_id, const std::string& doc_id) const;
    /// Grade, treating unjudged documents as 0.
    int grade_or_zero(const std::string& query_id, const std::string& doc_id) const;

    const std::map<std::string, int>* judgments(const std::string& query_id) const;
    bool has_positive(const std::string& query_id, int threshold = 1) const;

    const std::map<std::string, std::map<std::string, int>>& all() const { return by_query_; }
    std::size_t size() const;
    bool empty() const { return by_query_.empty(); }

    friend bool operator==(const Qrels&, const Qrels&) = default;

private:
    std::map<std::string, std::map<std::string, int>> by_query_;
};

} // namespace hardrank
