#include <doctest.h>

#include "hardrank/config.hpp"
#include "hardrank/errors.hpp"
#include "oracles.hpp"

using namespace hardrank;
using nlohmann::json;

TEST_SUITE("config")
{
    TEST_CASE("defaults survive a json round-trip")
    {
        PipelineConfig defaults;
        auto j = to_json(defaults);
        auto back = config_from_json(j, ".");
        CHECK(to_json(back) == j);
        CHECK(back.bm25.k1 == 0.9);
        CHECK(back.bm25.b == 0.4);
        CHECK(back.depth == 100);
        CHECK(back.qpp.orientation == "inverted");
        CHECK(back.fusion.tau == "train_median");
        CHECK(back.metrics.ndcg_k == 10);
    }

    TEST_CASE("empty object gives defaults")
    {
        auto c = config_from_json(json::object(), "/base");
        CHECK(to_json(c) == to_json(PipelineConfig{}));
        CHECK(c.base_dir == "/base");
    }

    TEST_CASE("unknown keys are rejected with their path")
    {
        try {
            config_from_json(json::parse(R"({"bm25": {"k3": 1.0}})"), ".");
            FAIL("expected InputError");
        } catch (const InputError& e) {
            CHECK(std::string(e.what()).find("bm25.k3") != std::string::npos);
        }
        CHECK_THROWS_AS(config_from_json(json::parse(R"({"nonsense": 1})"), "."), InputError);
    }

    TEST_CASE("wrong types are input errors")
    {
        CHECK_THROWS_AS(config_from_json(json::parse(R"({"depth": "many"})"), "."), InputError);
        CHECK_THROWS_AS(config_from_json(json::parse(R"({"bm25": 3})"), "."), InputError);
        CHECK_THROWS_AS(config_from_json(json::parse(R"({"metrics": {"include_no_positive": "yes"}})"), "."),
                        InputError);
    }

    TEST_CASE("out-of-range values are rejected")
    {
        for (const char* text : {R"({"bm25": {"k1": -1}})", R"({"bm25": {"b": 1.5}})", R"({"depth": 0})",
                                 R"({"generator": {"kind": "magic"}})", R"({"generator": {"kind": "http"}})",
                                 R"({"generator": {"context": "random"}})", R"({"generator": {"max_in_flight": 0}})",
                                 R"({"ranker": {"learning_rate": 0}})", R"({"qpp": {"k": 0}})",
                                 R"({"qpp": {"orientation": "up"}})", R"({"fusion": {"normalize": "z"}})",
                                 R"({"fusion": {"tau": 1.5}})", R"({"fusion": {"tau": "mean"}})",
                                 R"({"metrics": {"gain": "cubic"}})", R"({"threads": -2})"}) {
            CAPTURE(text);
            CHECK_THROWS_AS(config_from_json(json::parse(text), "."), InputError);
        }
    }

    TEST_CASE("tau as number or median policy")
    {
        auto fixed = config_from_json(json::parse(R"({"fusion": {"tau": 0.25}})"), ".");
        auto f = fixed.fusion_config(FusionMethod::r_qpp);
        CHECK(f.tau.kind == TauPolicy::Kind::fixed);
        CHECK(f.tau.value == 0.25);
        CHECK(f.tau.resolve(0.9) == 0.25);
        auto med = config_from_json(json::object(), ".").fusion_config(FusionMethod::r_qpp);
        CHECK(med.tau.kind == TauPolicy::Kind::train_median);
        CHECK(med.tau.resolve(0.7) == 0.7);
    }

    TEST_CASE("overrides")
    {
        json j = json::object();
        apply_override(j, "bm25.k1=1.2");
        apply_override(j, "generator.kind=http");
        apply_override(j, "generator.url=http://localhost:1/x");
        apply_override(j, "fusion.tau=0.3");
        apply_override(j, "metrics.include_no_positive=true");
        auto c = config_from_json(j, ".");
        CHECK(c.bm25.k1 == 1.2);
        CHECK(c.generator.kind == "http");
        CHECK(c.fusion.tau == 0.3);
        CHECK(c.metrics.include_no_positive);
        CHECK_THROWS_AS(apply_override(j, "no-equals"), InputError);
        CHECK_THROWS_AS(apply_override(j, "=1"), InputError);
        CHECK_THROWS_AS(apply_override(j, "bm25..k1=1"), InputError);
        apply_override(j, "depth=5");
        CHECK_THROWS_AS(apply_override(j, "depth.x=1"), InputError);
    }

    TEST_CASE("relative paths resolve against the config directory")
    {
        oracle::TempDir dir;
        oracle::write_text(dir / "sub" / "config.json",
                           "// comment\n{\"paths\": {\"corpus\": \"c.jsonl\", \"qrels\": \"/abs/q.txt\"}}\n");
        auto c = load_config(dir / "sub" / "config.json");
        CHECK(c.resolve(c.paths.corpus) == dir / "sub" / "c.jsonl");
        CHECK(c.resolve(c.paths.qrels) == "/abs/q.txt");
        CHECK(c.resolve("").empty());
        CHECK(c.resolve(c.paths.index) == dir / "sub" / "out/index.txt");
    }

    TEST_CASE("unreadable or malformed config files")
    {
        oracle::TempDir dir;
        CHECK_THROWS_AS(load_config(dir / "missing.json"), InputError);
        oracle::write_text(dir / "bad.json", "{not json");
        CHECK_THROWS_AS(load_config(dir / "bad.json"), InputError);
    }

    TEST_CASE("derived option structs")
    {
        auto c = config_from_json(json::parse(R"({"seed": 7, "ranker": {"epochs": 12, "learning_rate": 0.2},
            "metrics": {"gain": "linear", "rr_cutoff": 5}, "generator": {"context": "qrels", "max_tokens": 9}})"),
                                  ".");
        auto t = c.ranker_train_options();
        CHECK(t.epochs == 12);
        CHECK(t.learning_rate == 0.2);
        CHECK(t.seed == 7);
        auto m = c.metric_options();
        CHECK(m.gain == Gain::linear);
        CHECK(m.rr_cutoff == 5);
        Qrels q;
        auto e = c.enrich_options(&q);
        CHECK(e.context == ContextSource::best_judged);
        CHECK(e.qrels == &q);
        CHECK(e.max_tokens == 9);
        CHECK(c.sampling_options().seed == 7);
    }
}
