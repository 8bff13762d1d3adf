#include <doctest.h>

#include <random>
#include <sstream>

#include "fixtures.hpp"
#include "hardrank/errors.hpp"
#include "hardrank/qpp.hpp"
#include "oracles.hpp"

using namespace hardrank;

namespace {

RankedList scores_list(std::initializer_list<double> scores)
{
    RankedList out;
    int r = 1;
    for (double s : scores) {
        out.push_back({"d" + std::to_string(r), s, r});
        ++r;
    }
    return out;
}

const InvertedIndex& tiny_index()
{
    static const InvertedIndex index = [] {
        std::vector<Document> docs = {{"a", "alpha beta", {}}, {"b", "beta gamma", {}}, {"c", "gamma delta", {}}};
        return build_index(docs);
    }();
    return index;
}

} // namespace

TEST_SUITE("qpp")
{
    TEST_CASE("constant scores")
    {
        auto f = qpp_features({"q", "alpha", Hardness::unknown}, scores_list({4.0, 4.0, 4.0}), tiny_index());
        CHECK(f[0] == 4.0);
        CHECK(f[1] == 0.0);
        CHECK(f[2] == 4.0);
        CHECK(f[3] == 0.0);
    }

    TEST_CASE("k = 1")
    {
        auto f = qpp_features({"q", "alpha", Hardness::unknown}, scores_list({2.5}), tiny_index());
        CHECK(f[1] == 0.0);
        CHECK(f[3] == 0.0);
        CHECK(f[0] == f[2]);
    }

    TEST_CASE("scores 3, 2, 1")
    {
        auto f = qpp_features({"q", "alpha beta alpha", Hardness::unknown}, scores_list({3, 2, 1}), tiny_index());
        CHECK(f[0] == 2.0);
        CHECK(f[1] == doctest::Approx(std::sqrt(2.0 / 3.0)));
        CHECK(f[2] == 3.0);
        CHECK(f[3] == 2.0);
        CHECK(f[4] == 3.0);
        double idf_alpha = std::log((3 - 1 + 0.5) / 1.5);
        double idf_beta = std::max(0.0, std::log((3 - 2 + 0.5) / 2.5));
        CHECK(f[5] == doctest::Approx((idf_alpha + idf_beta) / 2));
    }

    TEST_CASE("empty top-k is an error")
    {
        CHECK_THROWS_AS(qpp_features({"q", "alpha", Hardness::unknown}, {}, tiny_index()), InputError);
    }

    TEST_CASE("loss is zero when the prediction equals a 0/1 target")
    {
        FeatureMatrix z(1);
        std::vector<double> a = {1.0}, b = {-1.0};
        z.add_row(a);
        z.add_row(b);
        std::vector<double> m = {1.0, 0.0};
        std::vector<double> w = {1000.0};
        CHECK(bce_loss(z, m, w, 0.0) == doctest::Approx(0.0).epsilon(1e-12));
    }

    TEST_CASE("M = 0.5 with psi = 0.5 costs ln 2")
    {
        FeatureMatrix z(2);
        std::vector<double> row = {0.3, -2.0};
        z.add_row(row);
        std::vector<double> m = {0.5};
        std::vector<double> w = {0.0, 0.0};
        CHECK(bce_loss(z, m, w, 0.0) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    }

    TEST_CASE("soft-target gradient matches central differences")
    {
        const auto& s = fixtures::synthetic();
        auto examples = fixtures::synthetic_qpp_examples();
        FeatureMatrix x(kQppFeatureDim);
        std::vector<double> y;
        for (const auto& ex : examples) {
            x.add_row(qpp_features(ex.query, RankedList(ex.retrieved.begin(), ex.retrieved.begin() + std::min<std::size_t>(10, ex.retrieved.size())), s.index));
            y.push_back(ex.label);
        }
        FeatureMatrix z = FeatureScaler::fit(x).apply(x);
        std::vector<std::vector<double>> rows;
        for (std::size_t i = 0; i < z.rows(); ++i) rows.emplace_back(z.row(i).begin(), z.row(i).end());
        std::mt19937_64 rng(2);
        std::normal_distribution<double> nd;
        double worst = 0.0;
        for (int rep = 0; rep < 100; ++rep) {
            std::vector<double> p(7);
            for (auto& v : p) v = nd(rng);
            std::vector<double> w(p.begin(), p.begin() + 6);
            std::vector<double> gw(6);
            double gb = 0.0;
            bce_gradient(z, y, w, p[6], gw, gb);
            auto num = oracle::central_difference(
                [&](const std::vector<double>& q) {
                    return oracle::mean_bce(rows, y, std::vector<double>(q.begin(), q.begin() + 6), q[6]);
                },
                p);
            for (int j = 0; j < 6; ++j) worst = std::max(worst, oracle::relative_error(gw[j], num[j]));
            worst = std::max(worst, oracle::relative_error(gb, num[6]));
        }
        CHECK(worst < 1e-4);
    }

    TEST_CASE("training loss is non-increasing at lr 0.05")
    {
        const auto& s = fixtures::synthetic();
        auto m = train_qpp(fixtures::synthetic_qpp_examples(), {500, 0.05, 0}, 10, QppOrientation::inverted, s.index);
        const auto& curve = m.core.loss_curve;
        REQUIRE(curve.size() == 501);
        for (std::size_t e = 1; e < curve.size(); ++e) CHECK(curve[e] <= curve[e - 1]);
        CHECK(curve.back() < curve.front());
    }

    TEST_CASE("label outside [0,1] and too few queries are errors")
    {
        const auto& s = fixtures::synthetic();
        auto ex = fixtures::synthetic_qpp_examples();
        auto bad = ex;
        bad[1].label = 1.2;
        CHECK_THROWS_AS(train_qpp(bad, {}, 10, QppOrientation::inverted, s.index), InputError);
        bad[1].label = -0.01;
        CHECK_THROWS_AS(train_qpp(bad, {}, 10, QppOrientation::inverted, s.index), InputError);
        std::vector<QppTrainingExample> one(ex.begin(), ex.begin() + 1);
        CHECK_THROWS_AS(train_qpp(one, {}, 10, QppOrientation::inverted, s.index), InputError);
    }

    TEST_CASE("zero-weight model estimates 0.5")
    {
        auto m = QppModel::untrained();
        auto e = estimate(m, {"q1", "alpha", Hardness::unknown}, scores_list({3, 2, 1}), tiny_index());
        CHECK(e.psi == 0.5);
        CHECK(e.query_id == "q1");
        CHECK(e.provider_id == "qpp:inverted");
    }

    TEST_CASE("estimates are deterministic and monotone in a positively weighted feature")
    {
        auto m = QppModel::untrained(10, QppOrientation::direct);
        m.core.weights[0] = 0.7; // mean score
        Query q{"q", "alpha", Hardness::unknown};
        auto a = estimate(m, q, scores_list({3, 2, 1}), tiny_index());
        CHECK(estimate(m, q, scores_list({3, 2, 1}), tiny_index()).psi == a.psi);
        double prev = 0.0;
        for (double shift = 0.0; shift < 10.0; shift += 0.5) {
            auto e = estimate(m, q, scores_list({3 + shift, 2 + shift, 1 + shift}), tiny_index());
            CHECK(e.psi > prev);
            prev = e.psi;
        }
        // inverted orientation reverses the direction
        m.orientation = QppOrientation::inverted;
        auto lo = estimate(m, q, scores_list({3, 2, 1}), tiny_index());
        auto hi = estimate(m, q, scores_list({9, 8, 7}), tiny_index());
        CHECK(hi.psi < lo.psi);
        CHECK(lo.psi == doctest::Approx(1.0 - a.psi));
    }

    TEST_CASE("only the top k entries are used")
    {
        auto m = QppModel::untrained(2, QppOrientation::direct);
        m.core.weights[0] = 1.0;
        Query q{"q", "alpha", Hardness::unknown};
        auto a = estimate(m, q, scores_list({5, 4, 1}), tiny_index());
        auto b = estimate(m, q, scores_list({5, 4, -100}), tiny_index());
        CHECK(a.psi == b.psi);
    }

    TEST_CASE("trained estimates lie in the open unit interval")
    {
        const auto& s = fixtures::synthetic();
        auto m = train_qpp(fixtures::synthetic_qpp_examples(), {500, 0.05, 0}, 10, QppOrientation::inverted, s.index);
        ModelQppProvider provider(m, s.index);
        auto psi = estimate_all(provider, s.queries, s.first_stage);
        CHECK(psi.size() == s.queries.size());
        for (const auto& [q, v] : psi) {
            CHECK(v > 0.0);
            CHECK(v < 1.0);
        }
        std::vector<double> values;
        for (const auto& [q, v] : psi) values.push_back(v);
        CHECK(m.train_median_psi == doctest::Approx(median(values)).epsilon(1e-12));
    }

    TEST_CASE("file provider")
    {
        FileQppProvider p({{"q1", 0.9}}, "file");
        CHECK(p.estimate({"q1", "x", Hardness::unknown}, {}).psi == 0.9);
        CHECK(p.estimate({"q1", "x", Hardness::unknown}, {}).provider_id == "file");
        CHECK_THROWS_AS(p.estimate({"q2", "x", Hardness::unknown}, {}), InputError);
        CHECK_THROWS_AS(FileQppProvider({{"q1", 1.5}}), InputError);

        oracle::TempDir dir;
        oracle::write_text(dir / "qpp.tsv", "q1\t0.9\n");
        auto fp = FileQppProvider::from_file(dir / "qpp.tsv");
        CHECK(fp.estimate({"q1", "x", Hardness::unknown}, {}).psi == 0.9);
        oracle::write_text(dir / "bad.tsv", "q1\t1.5\n");
        CHECK_THROWS_AS(FileQppProvider::from_file(dir / "bad.tsv"), InputError);
    }

    TEST_CASE("orientation names")
    {
        CHECK(parse_orientation("inverted") == QppOrientation::inverted);
        CHECK(parse_orientation("direct") == QppOrientation::direct);
        CHECK_THROWS_AS(parse_orientation("sideways"), InputError);
    }

    TEST_CASE("model round-trip")
    {
        const auto& s = fixtures::synthetic();
        auto m = train_qpp(fixtures::synthetic_qpp_examples(), {40, 0.05, 0}, 7, QppOrientation::direct, s.index);
        std::stringstream buf;
        m.save(buf);
        auto back = QppModel::load(buf);
        CHECK(back == m);
        CHECK(back.k == 7);
        CHECK(back.orientation == QppOrientation::direct);
    }

    TEST_CASE("median")
    {
        CHECK(median({3.0, 1.0, 2.0}) == 2.0);
        CHECK(median({4.0, 1.0, 2.0, 3.0}) == 2.5);
        CHECK_THROWS_AS(median({}), InputError);
    }
}
