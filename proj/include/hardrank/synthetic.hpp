#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "hardrank/types.hpp"

namespace hardrank {

/// A small two-population benchmark. Easy queries are long and descriptive;
/// first-stage BM25 already ranks their relevant documents well. Hard
/// queries are an acronym plus glue words; their relevant documents mention
/// the acronym once, up front, while off-topic documents repeat it further
/// down and win on BM25.
struct SyntheticOptions {
    std::uint64_t seed = 20240611;
    std::size_t hard_queries = 20;
    std::size_t easy_queries = 20;
    // 2 relevant (grades 3 and 1) plus this many judged off-topic documents.
    std::size_t hard_distractors = 4;
    std::size_t easy_distractors = 2;
};

struct SyntheticBenchmark {
    std::vector<Document> corpus;
    std::vector<Query> queries;
    Qrels qrels;
};

SyntheticBenchmark make_synthetic_benchmark(const SyntheticOptions& options = {});

/// Writes corpus.jsonl, queries.tsv, qrels.txt and hardness.tsv
/// (`<qid>\t<hard|easy>`) into `dir`.
void write_synthetic_benchmark(const SyntheticBenchmark& bench, const std::filesystem::path& dir);

std::map<std::string, Hardness> load_hardness_labels(const std::filesystem::path& path);

} // namespace hardrank
