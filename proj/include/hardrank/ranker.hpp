#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hardrank/features.hpp"
#include "hardrank/index.hpp"
#include "hardrank/logistic.hpp"
#include "hardrank/types.hpp"

namespace hardrank {

struct TrainingInstance {
    std::string query_id;
    std::string doc_id;
    FeatureVector features{};
    int label = 0;
};

/// Pointwise relevance model: sigmoid over normalized query-document features.
struct RankerModel {
    static constexpr std::string_view kFormatHeader = "hardrank-model v1";

    std::string name;
    LogisticModel core;

    /// Zero weights, identity normalization.
    static RankerModel untrained(std::string name = "untrained");

    void save(std::ostream& out) const;
    static RankerModel load(std::istream& in);
    void save(const std::filesystem::path& path) const;
    static RankerModel load(const std::filesystem::path& path);

    friend bool operator==(const RankerModel&, const RankerModel&) = default;
};

double score(const RankerModel& model, const FeatureVector& features);

/// Full-batch BCE descent from zero weights. Throws InputError on an empty
/// or single-class training set.
RankerModel train(std::span<const TrainingInstance> instances, const TrainOptions& options, std::string name);

struct SamplingOptions {
    // grade >= threshold is a positive
    int label_threshold = 1;
    int negatives_per_positive = 4;
    // negatives come from this many top first-stage candidates
    std::size_t pool_depth = 100;
    std::uint64_t seed = 42;
};

/// Positives are the judged documents with grade >= threshold; negatives are
/// drawn without replacement from the query's first-stage `pool`, skipping
/// positives. Features are computed against each query's text, so passing
/// enriched texts yields the specialized ranker's training set.
std::vector<TrainingInstance> build_training_instances(std::span<const Query> queries, const Qrels& qrels,
                                                       const RunList& pool, const DocumentStore& corpus,
                                                       const InvertedIndex& index, const Bm25Params& params,
                                                       const SamplingOptions& options);

/// Anything that can re-score a candidate list for a query. Implementations
/// are immutable and safe to call from several threads.
class Ranker {
public:
    virtual ~Ranker() = default;
    /// Same document set as `candidates`, re-scored, sorted descending with
    /// doc_id tie-breaks and ranked 1..n.
    virtual RankedList rerank(const Query& query, const RankedList& candidates) const = 0;
    virtual std::string id() const = 0;
};

class ModelRanker final : public Ranker {
public:
    ModelRanker(RankerModel model, const DocumentStore& corpus, const InvertedIndex& index, Bm25Params params);

    RankedList rerank(const Query& query, const RankedList& candidates) const override;
    std::string id() const override { return model_.name; }
    const RankerModel& model() const { return model_; }

private:
    RankerModel model_;
    const DocumentStore& corpus_;
    const InvertedIndex& index_;
    Bm25Params params_;
};

/// Throws InputError for a doc_id missing from the corpus.
RankedList rerank(const RankerModel& model, const Query& query, const RankedList& candidates,
                  const DocumentStore& corpus, const InvertedIndex& index, const Bm25Params& params);

/// Serves precomputed (query, doc) scores, e.g. from an external neural run.
class ScoreFileRanker final : public Ranker {
public:
    explicit ScoreFileRanker(std::map<std::pair<std::string, std::string>, double> scores, std::string name = "scores");
    explicit ScoreFileRanker(const RunList& run);

    /// Throws InputError naming the first (query, doc) pair without a score.
    RankedList rerank(const Query& query, const RankedList& candidates) const override;
    std::string id() const override { return name_; }

private:
    std::map<std::pair<std::string, std::string>, double> scores_;
    std::string name_;
};

/// Re-ranks every query's candidates; parallel across queries. Queries
/// without candidates get an empty list.
RunList rerank_all(const Ranker& ranker, std::span<const Query> queries, const RunList& candidates,
                   const std::string& tag);
RunList rerank_all_serial(const Ranker& ranker, std::span<const Query> queries, const RunList& candidates,
                          const std::string& tag);

} // namespace hardrank
