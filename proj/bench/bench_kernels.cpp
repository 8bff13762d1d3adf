// Serial reference kernels against their OpenMP versions on a scaled-up
// synthetic benchmark.
#include <benchmark/benchmark.h>

#include "hardrank/index.hpp"
#include "hardrank/metrics.hpp"
#include "hardrank/qpp.hpp"
#include "hardrank/ranker.hpp"
#include "hardrank/synthetic.hpp"

namespace {

using namespace hardrank;

struct Fixture {
    SyntheticBenchmark bench;
    DocumentStore store;
    InvertedIndex index;
    RunList first;
    RankerModel model;
    QppModel qpp;
    std::vector<std::string> qids;

    Fixture()
    {
        SyntheticOptions opts;
        opts.hard_queries = 400;
        opts.easy_queries = 400;
        bench = make_synthetic_benchmark(opts);
        store = DocumentStore(bench.corpus);
        index = build_index(bench.corpus);
        first = search_all_serial(index, bench.queries, 100, {});
        auto instances = build_training_instances(bench.queries, bench.qrels, first, store, index, {}, {});
        model = train(instances, {50, 0.1, 0}, "bench");
        std::vector<QppTrainingExample> examples;
        for (const auto& q : bench.queries) {
            const RankedList* list = first.find(q.query_id);
            if (list && !list->empty()) examples.push_back({q, *list, ndcg_at_k(*list, bench.qrels, q.query_id)});
        }
        qpp = train_qpp(examples, {50, 0.05, 0}, 10, QppOrientation::inverted, index);
        qids = evaluation_queries(bench.qrels, {});
    }
};

const Fixture& fixture()
{
    static const Fixture f;
    return f;
}

void BM_SearchSerial(benchmark::State& state)
{
    const auto& f = fixture();
    for (auto _ : state) benchmark::DoNotOptimize(search_all_serial(f.index, f.bench.queries, 100, {}));
}
void BM_SearchParallel(benchmark::State& state)
{
    const auto& f = fixture();
    for (auto _ : state) benchmark::DoNotOptimize(search_all(f.index, f.bench.queries, 100, {}));
}

void BM_RerankSerial(benchmark::State& state)
{
    const auto& f = fixture();
    ModelRanker ranker(f.model, f.store, f.index, {});
    for (auto _ : state) benchmark::DoNotOptimize(rerank_all_serial(ranker, f.bench.queries, f.first, "br"));
}
void BM_RerankParallel(benchmark::State& state)
{
    const auto& f = fixture();
    ModelRanker ranker(f.model, f.store, f.index, {});
    for (auto _ : state) benchmark::DoNotOptimize(rerank_all(ranker, f.bench.queries, f.first, "br"));
}

void BM_QppSerial(benchmark::State& state)
{
    const auto& f = fixture();
    ModelQppProvider provider(f.qpp, f.index);
    for (auto _ : state) benchmark::DoNotOptimize(estimate_all_serial(provider, f.bench.queries, f.first));
}
void BM_QppParallel(benchmark::State& state)
{
    const auto& f = fixture();
    ModelQppProvider provider(f.qpp, f.index);
    for (auto _ : state) benchmark::DoNotOptimize(estimate_all(provider, f.bench.queries, f.first));
}

void BM_EvalSerial(benchmark::State& state)
{
    const auto& f = fixture();
    for (auto _ : state) benchmark::DoNotOptimize(evaluate_run_serial(f.first, f.bench.qrels, f.qids, {}));
}
void BM_EvalParallel(benchmark::State& state)
{
    const auto& f = fixture();
    for (auto _ : state) benchmark::DoNotOptimize(evaluate_run(f.first, f.bench.qrels, f.qids, {}));
}

BENCHMARK(BM_SearchSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SearchParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_RerankSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RerankParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_QppSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_QppParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_EvalSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EvalParallel)->Unit(benchmark::kMillisecond)->UseRealTime();

} // namespace

BENCHMARK_MAIN();
