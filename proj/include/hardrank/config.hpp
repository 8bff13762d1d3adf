#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "hardrank/enrichment.hpp"
#include "hardrank/fusion.hpp"
#include "hardrank/hardness.hpp"
#include "hardrank/index.hpp"
#include "hardrank/logistic.hpp"
#include "hardrank/metrics.hpp"
#include "hardrank/qpp.hpp"
#include "hardrank/ranker.hpp"

namespace hardrank {

/// Everything the pipeline commands read. Relative paths resolve against the
/// directory holding the config file.
struct PipelineConfig {
    struct Paths {
        std::filesystem::path corpus;
        std::filesystem::path train_queries;
        std::filesystem::path test_queries;
        std::filesystem::path qrels;
        std::filesystem::path index = "out/index.txt";
        std::filesystem::path enriched = "out/enriched.tsv";
        std::filesystem::path models_dir = "out/models";
        std::filesystem::path runs_dir = "out/runs";
        std::filesystem::path reports_dir = "out/reports";
        // optional
        std::filesystem::path lexicon;
        std::filesystem::path qpp_scores;
        std::filesystem::path br_scores;
        std::filesystem::path sr_scores;
    } paths;

    Bm25Params bm25;
    std::size_t depth = 100;
    std::size_t passage_window = 120;

    struct Hardness {
        std::size_t max_token_count = 5;
        bool acronym_pattern = true;
        std::size_t min_context_terms = 2;
    } hardness;

    struct Generator {
        std::string kind = "stub";
        std::string url;
        std::string token_env = "HARDRANK_GENERATOR_TOKEN";
        int max_tokens = 64;
        int max_in_flight = 4;
        int max_retries = 3;
        int initial_backoff_ms = 200;
        int timeout_ms = 30000;
        // "bm25" (rank-1 document) or "qrels" (best judged document)
        std::string context = "bm25";
    } generator;

    struct Ranker {
        int epochs = 500;
        double learning_rate = 0.1;
        int label_threshold = 1;
        int negatives_per_positive = 4;
        std::size_t pool_depth = 100;
    } ranker;

    struct Qpp {
        std::size_t k = 10;
        int epochs = 500;
        double learning_rate = 0.05;
        std::string orientation = "inverted";
    } qpp;

    struct Fusion {
        std::string normalize = "per_query_min_max";
        // "train_median" or a number in [0,1]
        nlohmann::json tau = "train_median";
    } fusion;

    struct Metrics {
        std::size_t ndcg_k = 10;
        std::string gain = "exponential";
        std::size_t rr_cutoff = 0;
        int rel_threshold = 1;
        bool include_no_positive = false;
    } metrics;

    std::uint64_t seed = 42;
    // 0 = OpenMP default
    int threads = 0;

    std::filesystem::path base_dir = ".";

    /// Throws InputError for out-of-range values.
    void validate() const;
    std::filesystem::path resolve(const std::filesystem::path& p) const;

    HardnessRule hardness_rule() const;
    EnrichOptions enrich_options(const Qrels* qrels) const;
    TrainOptions ranker_train_options() const;
    SamplingOptions sampling_options() const;
    TrainOptions qpp_train_options() const;
    FusionConfig fusion_config(FusionMethod method) const;
    MetricOptions metric_options() const;
};

nlohmann::json to_json(const PipelineConfig& config);
/// Starts from defaults; unknown keys are an InputError.
PipelineConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
PipelineConfig load_config(const std::filesystem::path& path);

/// Applies "dotted.key=value"; the value is read as JSON when it parses,
/// otherwise as a string.
void apply_override(nlohmann::json& j, const std::string& assignment);

} // namespace hardrank
