// Loaders for the shipped test fixtures.
#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "hardrank/io.hpp"
#include "hardrank/metrics.hpp"
#include "hardrank/qpp.hpp"
#include "hardrank/ranker.hpp"

namespace fixtures {

inline std::filesystem::path data_dir() { return HARDRANK_DATA_DIR; }

/// Rows of `label<TAB>6 features`; labels mark overlap_ratio > 0.5.
inline std::vector<hardrank::TrainingInstance> separable_toy()
{
    std::ifstream in(data_dir() / "fixtures" / "separable_toy.tsv");
    std::vector<hardrank::TrainingInstance> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream row(line);
        hardrank::TrainingInstance t;
        t.query_id = "toy";
        t.doc_id = "r" + std::to_string(out.size());
        row >> t.label;
        for (auto& f : t.features) row >> f;
        out.push_back(t);
    }
    return out;
}

struct Synthetic {
    std::vector<hardrank::Document> docs;
    hardrank::DocumentStore store;
    hardrank::InvertedIndex index;
    std::vector<hardrank::Query> queries;
    hardrank::Qrels qrels;
    hardrank::RunList first_stage;
};

/// The shipped synthetic benchmark with its BM25 depth-100 run.
inline const Synthetic& synthetic()
{
    static const Synthetic s = [] {
        Synthetic x;
        auto dir = data_dir() / "synthetic";
        x.docs = hardrank::io::load_corpus(dir / "corpus.jsonl");
        x.store = hardrank::DocumentStore(x.docs);
        x.index = hardrank::build_index(x.docs);
        x.queries = hardrank::io::load_queries(dir / "queries.tsv");
        x.qrels = hardrank::io::load_qrels(dir / "qrels.txt");
        x.first_stage = hardrank::search_all_serial(x.index, x.queries, 100, {});
        return x;
    }();
    return s;
}

/// Base-ranker training instances drawn from the synthetic benchmark.
inline std::vector<hardrank::TrainingInstance> synthetic_ranker_instances()
{
    const auto& s = synthetic();
    return hardrank::build_training_instances(s.queries, s.qrels, s.first_stage, s.store, s.index, {}, {});
}

/// QPP examples labelled with nDCG@10 of the BM25 run.
inline std::vector<hardrank::QppTrainingExample> synthetic_qpp_examples()
{
    const auto& s = synthetic();
    std::vector<hardrank::QppTrainingExample> out;
    for (const auto& q : s.queries) {
        const auto* list = s.first_stage.find(q.query_id);
        if (!list || list->empty()) continue;
        out.push_back({q, *list, hardrank::ndcg_at_k(*list, s.qrels, q.query_id, 10)});
    }
    return out;
}

} // namespace fixtures
