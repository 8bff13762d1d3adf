#include <doctest.h>

#include <omp.h>

#include "fixtures.hpp"
#include "hardrank/fusion.hpp"
#include "hardrank/index.hpp"
#include "hardrank/metrics.hpp"
#include "hardrank/qpp.hpp"
#include "hardrank/ranker.hpp"

using namespace hardrank;

namespace {

// Forces several OpenMP threads even on a single-core machine.
struct Threads {
    int saved = omp_get_max_threads();
    explicit Threads(int n) { omp_set_num_threads(n); }
    ~Threads() { omp_set_num_threads(saved); }
};

struct Trained {
    RankerModel br;
    RankerModel sr;
    QppModel qpp;
};

const Trained& trained()
{
    static const Trained t = [] {
        const auto& s = fixtures::synthetic();
        auto instances = fixtures::synthetic_ranker_instances();
        Trained out{train(instances, {100, 0.1, 0}, "br"), {}, {}};
        // a differently weighted second ranker is enough here
        out.sr = train(std::vector<TrainingInstance>(instances.begin(), instances.begin() + instances.size() / 2),
                       {100, 0.1, 0}, "sr");
        out.qpp = train_qpp(fixtures::synthetic_qpp_examples(), {100, 0.05, 0}, 10, QppOrientation::inverted, s.index);
        return out;
    }();
    return t;
}

} // namespace

TEST_SUITE("parallel")
{
    TEST_CASE("search_all equals the serial reference")
    {
        Threads t(4);
        const auto& s = fixtures::synthetic();
        for (std::size_t k : {1, 10, 100, 1000}) {
            CAPTURE(k);
            CHECK(search_all(s.index, s.queries, k, {}) == search_all_serial(s.index, s.queries, k, {}));
        }
        Bm25Params p{1.5, 0.75};
        CHECK(search_all(s.index, s.queries, 50, p) == search_all_serial(s.index, s.queries, 50, p));
    }

    TEST_CASE("rerank_all equals the serial reference")
    {
        Threads t(4);
        const auto& s = fixtures::synthetic();
        ModelRanker ranker(trained().br, s.store, s.index, {});
        CHECK(rerank_all(ranker, s.queries, s.first_stage, "br") == rerank_all_serial(ranker, s.queries, s.first_stage, "br"));
    }

    TEST_CASE("estimate_all equals the serial reference")
    {
        Threads t(4);
        const auto& s = fixtures::synthetic();
        ModelQppProvider provider(trained().qpp, s.index);
        CHECK(estimate_all(provider, s.queries, s.first_stage) == estimate_all_serial(provider, s.queries, s.first_stage));
    }

    TEST_CASE("evaluate_run equals the serial reference")
    {
        Threads t(4);
        const auto& s = fixtures::synthetic();
        MetricOptions o;
        o.include_no_positive = true;
        auto ids = evaluation_queries(s.qrels, o);
        CHECK(evaluate_run(s.first_stage, s.qrels, ids, o) == evaluate_run_serial(s.first_stage, s.qrels, ids, o));
    }

    TEST_CASE("routing through rankers equals routing over finished runs")
    {
        Threads t(4);
        const auto& s = fixtures::synthetic();
        ModelRanker br(trained().br, s.store, s.index, {});
        ModelRanker sr(trained().sr, s.store, s.index, {});
        ModelQppProvider provider(trained().qpp, s.index);
        auto psi = estimate_all(provider, s.queries, s.first_stage);
        auto br_run = rerank_all(br, s.queries, s.first_stage, "br");
        auto sr_run = rerank_all(sr, s.queries, s.first_stage, "sr");
        double tau = trained().qpp.train_median_psi;
        auto direct = route_qpp(br, sr, provider, s.queries, s.first_stage, tau);
        auto offline = route_runs(br_run, sr_run, psi, tau);
        CHECK(direct.run.queries == offline.run.queries);
        REQUIRE(direct.decisions.size() == offline.decisions.size());
        for (std::size_t i = 0; i < direct.decisions.size(); ++i) {
            CHECK(direct.decisions[i].query_id == offline.decisions[i].query_id);
            CHECK(direct.decisions[i].specialized == offline.decisions[i].specialized);
            CHECK(direct.decisions[i].psi == offline.decisions[i].psi);
        }
    }

    TEST_CASE("thread count does not change results")
    {
        const auto& s = fixtures::synthetic();
        RunList one, many;
        {
            Threads t(1);
            one = search_all(s.index, s.queries, 100, {});
        }
        {
            Threads t(7);
            many = search_all(s.index, s.queries, 100, {});
        }
        CHECK(one == many);
    }
}
