#include <doctest.h>

#include <random>

#include <json.hpp>

#include "hardrank/errors.hpp"
#include "hardrank/metrics.hpp"
#include "hardrank/report.hpp"
#include "hardrank/stats.hpp"
#include "oracles.hpp"

using namespace hardrank;

namespace {

RankedList ranking(std::initializer_list<const char*> ids)
{
    RankedList out;
    int r = 1;
    for (const char* id : ids) {
        out.push_back({id, 100.0 - r, r});
        ++r;
    }
    return out;
}

std::vector<std::string> ids_of(const RankedList& l)
{
    std::vector<std::string> out;
    for (const auto& r : l) out.push_back(r.doc_id);
    return out;
}

} // namespace

TEST_SUITE("evaluation")
{
    TEST_CASE("ideal ordering scores 1")
    {
        Qrels q;
        q.add("q", "a", 3);
        q.add("q", "b", 1);
        q.add("q", "c", 0);
        CHECK(ndcg_at_k(ranking({"a", "b", "c"}), q, "q") == doctest::Approx(1.0).epsilon(1e-15));
    }

    TEST_CASE("hand-evaluated nDCG")
    {
        Qrels q;
        q.add("q", "d1", 3);
        q.add("q", "d2", 1);
        const double dcg = 1.0 + 7.0 / std::log2(3.0);
        const double idcg = 7.0 + 1.0 / std::log2(3.0);
        CHECK(dcg == doctest::Approx(5.41650).epsilon(1e-5));
        CHECK(idcg == doctest::Approx(7.63093).epsilon(1e-5));
        double got = ndcg_at_k(ranking({"d2", "d1", "d3"}), q, "q");
        CHECK(std::fabs(got - 0.70981) < 1e-5);
        CHECK(got == doctest::Approx(dcg / idcg).epsilon(1e-15));
    }

    TEST_CASE("no relevant document in the top k")
    {
        Qrels q;
        q.add("q", "rel", 2);
        RankedList l;
        for (int i = 0; i < 10; ++i) l.push_back({"n" + std::to_string(i), 10.0 - i, i + 1});
        l.push_back({"rel", -1, 11});
        CHECK(ndcg_at_k(l, q, "q", 10) == 0.0);
        CHECK(ndcg_at_k(l, q, "q", 11) > 0.0);
    }

    TEST_CASE("query without positives scores 0")
    {
        Qrels q;
        q.add("q", "a", 0);
        CHECK(ndcg_at_k(ranking({"a"}), q, "q") == 0.0);
        CHECK(ndcg_at_k(ranking({"a"}), q, "unknown") == 0.0);
    }

    TEST_CASE("IDCG uses all judged documents, not just retrieved ones")
    {
        Qrels q;
        q.add("q", "a", 1);
        q.add("q", "b", 3);
        // b is never retrieved
        double expect = 1.0 / (7.0 + 1.0 / std::log2(3.0));
        CHECK(ndcg_at_k(ranking({"a"}), q, "q") == doctest::Approx(expect).epsilon(1e-15));
    }

    TEST_CASE("linear gain")
    {
        Qrels q;
        q.add("q", "d1", 3);
        q.add("q", "d2", 1);
        double expect = (1.0 + 3.0 / std::log2(3.0)) / (3.0 + 1.0 / std::log2(3.0));
        CHECK(ndcg_at_k(ranking({"d2", "d1"}), q, "q", 10, Gain::linear) == doctest::Approx(expect).epsilon(1e-15));
    }

    TEST_CASE("reciprocal rank")
    {
        Qrels q;
        q.add("q", "r", 1);
        CHECK(reciprocal_rank(ranking({"r", "x"}), q, "q") == 1.0);
        CHECK(reciprocal_rank(ranking({"x", "y", "r"}), q, "q") == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
        CHECK(std::fabs(reciprocal_rank(ranking({"x", "y", "r"}), q, "q") - 0.33333) < 1e-5);
        CHECK(reciprocal_rank(ranking({"x", "y"}), q, "q") == 0.0);
        CHECK(reciprocal_rank(ranking({"x", "y", "r"}), q, "q", 2) == 0.0);
        Qrels g;
        g.add("q", "one", 1);
        g.add("q", "two", 2);
        CHECK(reciprocal_rank(ranking({"one", "two"}), g, "q", 0, 2) == 0.5);
    }

    TEST_CASE("metrics agree with brute-force oracle")
    {
        std::mt19937_64 rng(31);
        for (int rep = 0; rep < 500; ++rep) {
            std::size_t n = 1 + rng() % 5;
            Qrels q;
            std::map<std::string, int> grades;
            RankedList l;
            for (std::size_t i = 0; i < n; ++i) {
                std::string d = "d" + std::to_string(i);
                if (rng() % 4) {
                    int g = static_cast<int>(rng() % 4);
                    q.add("q", d, g);
                    grades[d] = g;
                }
                l.push_back({d, 0.0, 0});
            }
            // one judged document that is never retrieved
            if (rng() % 2) {
                q.add("q", "unret", 2);
                grades["unret"] = 2;
            }
            std::shuffle(l.begin(), l.end(), rng);
            for (std::size_t i = 0; i < l.size(); ++i) l[i].score = static_cast<double>(n - i), l[i].rank = static_cast<int>(i + 1);
            std::size_t k = 1 + rng() % 10;
            auto ids = ids_of(l);
            CHECK(std::fabs(ndcg_at_k(l, q, "q", k) - oracle::ndcg(ids, grades, k)) < 1e-10);
            CHECK(std::fabs(ndcg_at_k(l, q, "q", k, Gain::linear) - oracle::ndcg(ids, grades, k, false)) < 1e-10);
            CHECK(std::fabs(reciprocal_rank(l, q, "q") - oracle::rr(ids, grades)) < 1e-10);
        }
    }

    TEST_CASE("nDCG invariances and bounds")
    {
        std::mt19937_64 rng(41);
        for (int rep = 0; rep < 200; ++rep) {
            Qrels q;
            RankedList l;
            const int n = 15;
            for (int i = 0; i < n; ++i) {
                std::string d = "d" + std::to_string(i);
                if (rng() % 2) q.add("q", d, static_cast<int>(rng() % 4));
                l.push_back({d, static_cast<double>(n - i), i + 1});
            }
            std::shuffle(l.begin(), l.end(), rng);
            for (int i = 0; i < n; ++i) l[i].score = n - i, l[i].rank = i + 1;
            const std::size_t k = 5;
            double base = ndcg_at_k(l, q, "q", k);
            CHECK(base >= 0.0);
            CHECK(base <= 1.0 + 1e-12);
            double rr = reciprocal_rank(l, q, "q");
            CHECK(rr >= 0.0);
            CHECK(rr <= 1.0);
            // permuting below rank k changes nothing
            auto perm = l;
            std::shuffle(perm.begin() + k, perm.end(), rng);
            CHECK(ndcg_at_k(perm, q, "q", k) == base);
            // unjudged documents appended beyond k change nothing
            auto longer = l;
            longer.push_back({"unjudged", -1.0, n + 1});
            CHECK(ndcg_at_k(longer, q, "q", k) == base);
            // the ideal ranking is the maximum
            std::vector<std::pair<int, std::string>> ideal;
            for (const auto& r : l) ideal.emplace_back(q.grade_or_zero("q", r.doc_id), r.doc_id);
            std::sort(ideal.begin(), ideal.end(), [](auto& a, auto& b) { return a.first > b.first; });
            RankedList best;
            for (const auto& [g, d] : ideal) best.push_back({d, 0, 0});
            double top = ndcg_at_k(best, q, "q", k);
            CHECK(base <= top + 1e-12);
            if (q.has_positive("q")) CHECK(top == doctest::Approx(1.0));
        }
    }

    TEST_CASE("evaluation query set")
    {
        Qrels q;
        q.add("a", "d", 1);
        q.add("b", "d", 0);
        MetricOptions o;
        CHECK(evaluation_queries(q, o) == std::vector<std::string>{"a"});
        o.include_no_positive = true;
        CHECK(evaluation_queries(q, o) == std::vector<std::string>{"a", "b"});
    }

    TEST_CASE("queries missing from a run score 0")
    {
        Qrels q;
        q.add("a", "d", 1);
        q.add("b", "d", 1);
        RunList run;
        run.queries["a"] = ranking({"d"});
        std::vector<std::string> ids = {"a", "b"};
        auto m = evaluate_run(run, q, ids, {});
        CHECK(m.at("a") == QueryMetrics{1.0, 1.0});
        CHECK(m.at("b") == QueryMetrics{0.0, 0.0});
    }

    TEST_CASE("relative improvement with the published aggregates")
    {
        CHECK(relative_improvement(0.659, 0.444) == doctest::Approx(48.4));
        CHECK(relative_improvement(0.535, 0.444) == doctest::Approx(20.5));
        CHECK(relative_improvement(0.444, 0.444) == 0.0);
        CHECK(relative_improvement_exact(0.659, 0.444) == doctest::Approx((0.659 - 0.444) / 0.444 * 100));
        CHECK(relative_improvement(0.4, 0.5) == doctest::Approx(-20.0));
        CHECK_THROWS_AS(relative_improvement(0.5, 0.0), InputError);
        CHECK_THROWS_AS(relative_improvement(0.5, -1.0), InputError);
    }

    TEST_CASE("paired test on diffs 0.1, 0.2, 0.3")
    {
        std::vector<double> base = {0.5, 0.4, 0.3};
        std::vector<double> sys = {0.6, 0.6, 0.6};
        auto r = paired_test(sys, base);
        CHECK(r.t == doctest::Approx(2.0 * std::sqrt(3.0)).epsilon(1e-9));
        CHECK(std::fabs(r.t - 3.4641) < 1e-4);
        CHECK(r.df == 2);
        // df = 2 closed form: p = 1 - t / sqrt(t^2 + 2)
        double closed = 1.0 - r.t / std::sqrt(r.t * r.t + 2.0);
        CHECK(r.p == doctest::Approx(closed).epsilon(1e-10));
        CHECK(std::fabs(r.p - 0.0742) < 1e-3);
        CHECK(r.level == Significance::p90);
        CHECK(significance_marker(r.level) == "#");
    }

    TEST_CASE("paired test agrees with numeric integration of the t density")
    {
        std::mt19937_64 rng(8);
        std::normal_distribution<double> nd(0.02, 0.1);
        for (int rep = 0; rep < 20; ++rep) {
            std::size_t n = 3 + rng() % 30;
            std::vector<double> a(n), b(n), d(n);
            for (std::size_t i = 0; i < n; ++i) {
                b[i] = 0.5;
                a[i] = 0.5 + nd(rng);
                d[i] = a[i] - b[i];
            }
            auto r = paired_test(a, b);
            CHECK(r.t == doctest::Approx(oracle::paired_t(d)).epsilon(1e-9));
            CHECK(r.p == doctest::Approx(oracle::t_two_tailed_p(r.t, r.df)).epsilon(1e-7));
        }
    }

    TEST_CASE("paired test edge cases")
    {
        std::vector<double> a = {0.1, 0.5, 0.9};
        auto same = paired_test(a, a);
        CHECK(same.p == 1.0);
        CHECK(same.level == Significance::none);
        CHECK(same.zero_variance);

        std::vector<double> shifted = {0.2, 0.6, 1.0};
        auto constant = paired_test(shifted, a);
        CHECK(constant.zero_variance);
        CHECK(constant.p == 0.0);
        CHECK(constant.level == Significance::p95);
        CHECK(std::isinf(constant.t));

        std::vector<double> shorter = {0.1, 0.2};
        CHECK_THROWS_AS(paired_test(a, shorter), InputError);
        std::vector<double> single = {0.1};
        CHECK_THROWS_AS(paired_test(single, single), InputError);
    }

    TEST_CASE("paired test is antisymmetric in t")
    {
        std::mt19937_64 rng(10);
        std::uniform_real_distribution<double> u(0, 1);
        for (int rep = 0; rep < 20; ++rep) {
            std::vector<double> a(10), b(10);
            for (auto& x : a) x = u(rng);
            for (auto& x : b) x = u(rng);
            auto ab = paired_test(a, b);
            auto ba = paired_test(b, a);
            CHECK(ab.t == doctest::Approx(-ba.t).epsilon(1e-12));
            CHECK(ab.p == doctest::Approx(ba.p).epsilon(1e-12));
        }
    }

    TEST_CASE("significance levels")
    {
        CHECK(significance_level(0.01) == Significance::p95);
        CHECK(significance_level(0.05) == Significance::p90);
        CHECK(significance_level(0.0999) == Significance::p90);
        CHECK(significance_level(0.10) == Significance::none);
        CHECK(significance_marker(Significance::p95) == "*");
        CHECK(significance_marker(Significance::none).empty());
    }

    TEST_CASE("report over two identical runs")
    {
        Qrels q;
        RunList run;
        for (int i = 0; i < 5; ++i) {
            std::string qid = "q" + std::to_string(i);
            q.add(qid, "rel", 1);
            run.queries[qid] = i % 2 ? ranking({"x", "rel"}) : ranking({"rel", "x"});
        }
        auto report = build_report({{"base", run}, {"copy", run}}, q, "base", {});
        REQUIRE(report.systems.size() == 2);
        const auto& copy = report.systems[1];
        CHECK(*copy.ndcg.delta_pct == 0.0);
        CHECK(*copy.rr.delta_pct == 0.0);
        CHECK(copy.ndcg.test.p == 1.0);
        CHECK(copy.rr.test.p == 1.0);
        CHECK_FALSE(report.has_comparison_errors());
        CHECK(report.test_name == std::string(kPairedTestName));
    }

    TEST_CASE("report with a missing baseline")
    {
        Qrels q;
        q.add("q", "d", 1);
        RunList run;
        CHECK_THROWS_AS(build_report({{"a", run}}, q, "b", {}), InputError);
    }

    TEST_CASE("three-run report matches hand computation")
    {
        // q1: rel a(3) b(1); q2: rel c(2)
        Qrels q;
        q.add("q1", "a", 3);
        q.add("q1", "b", 1);
        q.add("q2", "c", 2);
        RunList base, mid, best;
        base.queries["q1"] = ranking({"x", "b", "a"});
        base.queries["q2"] = ranking({"x", "y", "c"});
        mid.queries["q1"] = ranking({"b", "a"});
        mid.queries["q2"] = ranking({"x", "c"});
        best.queries["q1"] = ranking({"a", "b"});
        best.queries["q2"] = ranking({"c"});
        auto report = build_report({{"base", base}, {"mid", mid}, {"best", best}}, q, "base", {});

        const double l3 = std::log2(3.0), l4 = 2.0;
        const double idcg1 = 7.0 + 1.0 / l3, idcg2 = 3.0;
        const double base_ndcg = ((1.0 / l3 + 7.0 / l4) / idcg1 + (3.0 / l4) / idcg2) / 2.0;
        const double mid_ndcg = ((1.0 + 7.0 / l3) / idcg1 + (3.0 / l3) / idcg2) / 2.0;
        const double base_rr = (0.5 + 1.0 / 3.0) / 2.0;
        const double mid_rr = (1.0 + 0.5) / 2.0;

        CHECK(report.systems[0].ndcg.mean == doctest::Approx(base_ndcg).epsilon(1e-12));
        CHECK(report.systems[1].ndcg.mean == doctest::Approx(mid_ndcg).epsilon(1e-12));
        CHECK(report.systems[2].ndcg.mean == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(report.systems[0].rr.mean == doctest::Approx(base_rr).epsilon(1e-12));
        CHECK(report.systems[1].rr.mean == doctest::Approx(mid_rr).epsilon(1e-12));
        auto pct = [](double s, double b) { return std::round((s - b) / b * 1000.0) / 10.0; };
        CHECK(*report.systems[1].ndcg.delta_pct == doctest::Approx(pct(mid_ndcg, base_ndcg)));
        CHECK(*report.systems[2].ndcg.delta_pct == doctest::Approx(pct(1.0, base_ndcg)));
        CHECK(*report.systems[1].rr.delta_pct == doctest::Approx(pct(mid_rr, base_rr)));
        CHECK(*report.systems[2].rr.delta_pct == doctest::Approx(pct(1.0, base_rr)));

        auto table = render_table(report);
        CHECK(table.find("base (baseline)") != std::string::npos);
        CHECK(table.find("nDCG@10") != std::string::npos);
        auto jsonl = render_jsonl(report);
        std::istringstream lines(jsonl);
        int count = 0;
        for (std::string line; std::getline(lines, line); ++count) {
            auto j = nlohmann::json::parse(line);
            CHECK(j.contains("system"));
            CHECK(j["test"] == std::string(kPairedTestName));
        }
        CHECK(count == 3);
    }

    TEST_CASE("table shows deltas and markers")
    {
        Qrels q;
        RunList base, better;
        for (int i = 0; i < 12; ++i) {
            std::string qid = "q" + std::to_string(i);
            q.add(qid, "rel", 1);
            base.queries[qid] = ranking({"x", "y", "rel"});
            better.queries[qid] = ranking({"rel", "x", "y"});
        }
        auto report = build_report({{"br", base}, {"sys", better}}, q, "br", {});
        auto table = render_table(report);
        CHECK(table.find("1.000 (+200.0)*") != std::string::npos);
        CHECK(table.find("0.333") != std::string::npos);
    }

    TEST_CASE("zero baseline is a comparison error")
    {
        Qrels q;
        q.add("q1", "rel", 1);
        q.add("q2", "rel", 1);
        RunList zero, some;
        zero.queries["q1"] = ranking({"x"});
        zero.queries["q2"] = ranking({"x"});
        some.queries["q1"] = ranking({"rel"});
        some.queries["q2"] = ranking({"x"});
        auto report = build_report({{"zero", zero}, {"some", some}}, q, "zero", {});
        CHECK(report.has_comparison_errors());
        CHECK_FALSE(report.systems[1].ndcg.delta_pct);
    }
}
