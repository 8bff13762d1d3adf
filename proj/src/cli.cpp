#include "hardrank/cli.hpp"

#include <omp.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "hardrank/config.hpp"
#include "hardrank/errors.hpp"
#include "hardrank/io.hpp"
#include "hardrank/log.hpp"
#include "hardrank/passage.hpp"
#include "hardrank/report.hpp"
#include "hardrank/text.hpp"

namespace hardrank {

namespace fs = std::filesystem;

namespace {

// Flags shared by every subcommand.
struct Common {
    std::string config_path;
    std::vector<std::string> overrides;
    bool verbose = false;
    bool quiet = false;
};

void add_common(CLI::App& cmd, Common& common)
{
    cmd.add_option("-c,--config", common.config_path, "Pipeline config (JSON)");
    cmd.add_option("--set", common.overrides, "Override a config key: dotted.key=value")->allow_extra_args(false);
    cmd.add_flag("-v,--verbose", common.verbose, "Log progress to stderr");
    cmd.add_flag("-q,--quiet", common.quiet, "Only log errors");
}

// A path given on the command line is relative to the working directory,
// unlike paths inside the config file.
std::string path_override(const std::string& key, const std::string& value)
{
    nlohmann::json v = fs::absolute(value).lexically_normal().string();
    return key + "=" + v.dump();
}

PipelineConfig load_pipeline_config(const Common& common, std::vector<std::string> overrides)
{
    if (common.quiet) {
        log::set_level(log::Level::quiet);
    } else if (common.verbose) {
        log::set_level(log::Level::info);
    } else {
        log::set_level(log::Level::warn);
    }

    nlohmann::json user = nlohmann::json::object();
    fs::path base = fs::current_path();
    if (!common.config_path.empty()) {
        fs::path cfg = common.config_path;
        std::ifstream in(cfg);
        if (!in) throw InputError("cannot open config '" + cfg.string() + "'");
        try {
            user = nlohmann::json::parse(in, nullptr, true, true);
        } catch (const nlohmann::json::parse_error& e) {
            throw InputError("config '" + cfg.string() + "': " + e.what());
        }
        base = fs::absolute(cfg).parent_path();
    }
    for (const auto& o : common.overrides) apply_override(user, o);
    for (const auto& o : overrides) apply_override(user, o);
    PipelineConfig config = config_from_json(user, base);
    if (config.threads > 0) omp_set_num_threads(config.threads);
    return config;
}

fs::path require_file(const PipelineConfig& config, const fs::path& configured, const std::string& key)
{
    if (configured.empty()) throw InputError("config key '" + key + "' is not set");
    fs::path p = config.resolve(configured);
    if (!fs::is_regular_file(p)) throw InputError(key + ": file not found: " + p.string());
    return p;
}

std::optional<fs::path> optional_file(const PipelineConfig& config, const fs::path& configured, const std::string& key)
{
    if (configured.empty()) return std::nullopt;
    return require_file(config, configured, key);
}

void ensure_parent(const fs::path& p)
{
    std::error_code ec;
    if (p.has_parent_path()) fs::create_directories(p.parent_path(), ec);
    if (ec) throw RuntimeFailure("cannot create directory " + p.parent_path().string() + ": " + ec.message());
}

void ensure_dir(const fs::path& p)
{
    std::error_code ec;
    fs::create_directories(p, ec);
    if (ec) throw RuntimeFailure("cannot create directory " + p.string() + ": " + ec.message());
}

std::string run_to_string(const RunList& run, const std::string& tag = {})
{
    std::ostringstream out;
    io::write_run(out, run, tag);
    return out.str();
}

InvertedIndex load_index(const PipelineConfig& config)
{
    fs::path p = config.resolve(config.paths.index);
    if (!fs::is_regular_file(p)) throw InputError("index not found: " + p.string() + " (run 'hardrank index' first)");
    return InvertedIndex::load(p);
}

fs::path model_path(const PipelineConfig& config, const std::string& which)
{
    return config.resolve(config.paths.models_dir) / (which + ".model");
}

fs::path run_path(const PipelineConfig& config, const std::string& name)
{
    return config.resolve(config.paths.runs_dir) / (name + ".run");
}

void write_loss_curve(const fs::path& path, const LogisticModel& core)
{
    std::ostringstream out;
    out << "epoch\tloss\n";
    for (std::size_t e = 0; e < core.loss_curve.size(); ++e) out << e << '\t' << format_double(core.loss_curve[e]) << '\n';
    io::write_file_atomic(path, out.str());
}

// ---- index ----------------------------------------------------------------

int cmd_index(const PipelineConfig& config, bool force)
{
    fs::path corpus_path = require_file(config, config.paths.corpus, "paths.corpus");
    fs::path out = config.resolve(config.paths.index);
    if (fs::exists(out) && !force) throw InputError("index " + out.string() + " already exists (use --force to rebuild)");

    auto corpus = io::load_corpus(corpus_path);
    auto index = build_index(corpus);
    ensure_parent(out);
    std::ostringstream buf;
    index.save(buf);
    io::write_file_atomic(out, buf.str());
    std::cout << "indexed " << index.num_docs() << " documents, " << index.num_terms() << " terms -> " << out.string()
              << '\n';
    return kExitOk;
}

// ---- enrich ---------------------------------------------------------------

std::unique_ptr<TextGenerator> make_generator(const PipelineConfig& config)
{
    if (config.generator.kind == "stub") return std::make_unique<StubGenerator>();
    HttpGeneratorOptions o;
    o.url = config.generator.url;
    if (!config.generator.token_env.empty()) {
        if (const char* t = std::getenv(config.generator.token_env.c_str())) o.token = t;
    }
    o.max_in_flight = config.generator.max_in_flight;
    o.max_retries = config.generator.max_retries;
    o.initial_backoff = std::chrono::milliseconds(config.generator.initial_backoff_ms);
    o.timeout = std::chrono::milliseconds(config.generator.timeout_ms);
    return std::make_unique<HttpGenerator>(o);
}

int cmd_enrich(const PipelineConfig& config)
{
    fs::path queries_path = require_file(config, config.paths.train_queries, "paths.train_queries");
    fs::path corpus_path = require_file(config, config.paths.corpus, "paths.corpus");
    std::optional<Qrels> qrels;
    if (config.generator.context == "qrels") {
        qrels = io::load_qrels(require_file(config, config.paths.qrels, "paths.qrels"));
    }
    HardnessRule rule = config.hardness_rule();
    InvertedIndex index = load_index(config);
    DocumentStore corpus(io::load_corpus(corpus_path));
    auto queries = io::load_queries(queries_path);
    auto generator = make_generator(config);
    LexicalPassageSelector selector(config.passage_window, config.bm25);

    std::vector<Query> hard;
    for (auto q : queries) {
        q.hardness = classify_hardness(q, rule);
        if (q.hardness == Hardness::hard) hard.push_back(std::move(q));
    }
    log::info("enrich: " + std::to_string(hard.size()) + " of " + std::to_string(queries.size()) +
              " queries classified hard");

    auto outcomes = enrich_all(hard, index, corpus, *generator, selector, config.enrich_options(qrels ? &*qrels : nullptr),
                               static_cast<std::size_t>(config.generator.max_in_flight));

    std::vector<EnrichedQuery> rows;
    std::vector<std::pair<std::string, std::string>> failures;
    std::size_t fallbacks = 0;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        if (outcomes[i].enriched) {
            if (outcomes[i].enriched->is_fallback()) ++fallbacks;
            rows.push_back(*outcomes[i].enriched);
        } else {
            failures.emplace_back(hard[i].query_id, outcomes[i].error);
        }
    }

    fs::path out = config.resolve(config.paths.enriched);
    ensure_parent(out);
    std::ostringstream buf;
    write_enriched(buf, rows);
    if (!failures.empty()) {
        fs::path partial = out;
        partial += ".partial";
        fs::path report = out;
        report += ".failures.tsv";
        io::write_file_atomic(partial, buf.str());
        std::ostringstream fail;
        for (const auto& [qid, err] : failures) {
            fail << qid << '\t' << err << '\n';
            std::cerr << "enrich failed for " << qid << ": " << err << '\n';
        }
        io::write_file_atomic(report, fail.str());
        std::cerr << failures.size() << " of " << hard.size() << " hard queries failed; partial output in "
                  << partial.string() << ", failures in " << report.string() << '\n';
        return kExitRuntime;
    }
    io::write_file_atomic(out, buf.str());
    std::cout << "enriched " << rows.size() << " of " << queries.size() << " queries (" << hard.size() << " hard, "
              << fallbacks << " fallbacks) -> " << out.string() << '\n';
    return kExitOk;
}

// ---- train ----------------------------------------------------------------

int train_ranker(const PipelineConfig& config, const std::string& which)
{
    fs::path queries_path = require_file(config, config.paths.train_queries, "paths.train_queries");
    fs::path qrels_path = require_file(config, config.paths.qrels, "paths.qrels");
    fs::path corpus_path = require_file(config, config.paths.corpus, "paths.corpus");
    std::optional<fs::path> enriched_path;
    if (which == "sr") {
        fs::path p = config.resolve(config.paths.enriched);
        if (!fs::is_regular_file(p)) {
            throw InputError("SR requires enriched training queries (" + p.string() +
                             " not found; run 'hardrank enrich' first)");
        }
        enriched_path = p;
    }
    InvertedIndex index = load_index(config);
    DocumentStore corpus(io::load_corpus(corpus_path));
    Qrels qrels = io::load_qrels(qrels_path);
    auto originals = io::load_queries(queries_path);

    std::vector<Query> training;
    if (which == "sr") {
        std::map<std::string, const Query*> by_id;
        for (const auto& q : originals) by_id[q.query_id] = &q;
        for (const auto& row : load_enriched(*enriched_path)) {
            if (row.is_fallback()) continue;
            if (!by_id.count(row.query_id)) {
                throw InputError("enriched query " + row.query_id + " is not among the training queries");
            }
            training.push_back({row.query_id, row.enriched_text, Hardness::hard});
        }
        if (training.empty()) throw InputError("SR requires enriched training queries (none in " + enriched_path->string() + ")");
    } else {
        training = originals;
    }

    // Negatives come from the first-stage pool of the original query text.
    std::vector<Query> pool_queries;
    {
        std::map<std::string, const Query*> by_id;
        for (const auto& q : originals) by_id[q.query_id] = &q;
        for (const auto& q : training) pool_queries.push_back(*by_id.at(q.query_id));
    }
    RunList pool = search_all(index, pool_queries, config.ranker.pool_depth, config.bm25);
    auto instances = build_training_instances(training, qrels, pool, corpus, index, config.bm25, config.sampling_options());
    RankerModel model = train(instances, config.ranker_train_options(), which);

    fs::path out = model_path(config, which);
    ensure_parent(out);
    std::ostringstream buf;
    model.save(buf);
    io::write_file_atomic(out, buf.str());
    fs::path loss = out;
    loss.replace_extension(".loss.tsv");
    write_loss_curve(loss, model.core);
    const auto& curve = model.core.loss_curve;
    std::cout << "trained " << which << " on " << training.size() << " queries / " << instances.size()
              << " instances; loss " << format_fixed(curve.front(), 4) << " -> " << format_fixed(curve.back(), 4)
              << " -> " << out.string() << '\n';
    return kExitOk;
}

int train_qpp_model(const PipelineConfig& config)
{
    fs::path queries_path = require_file(config, config.paths.train_queries, "paths.train_queries");
    if (config.paths.qrels.empty()) {
        throw InputError("QPP training needs qrels: its labels are nDCG@10 of the first-stage run");
    }
    fs::path qrels_path = require_file(config, config.paths.qrels, "paths.qrels");
    InvertedIndex index = load_index(config);
    Qrels qrels = io::load_qrels(qrels_path);
    auto queries = io::load_queries(queries_path);

    RunList first = search_all(index, queries, config.depth, config.bm25);
    std::vector<QppTrainingExample> examples;
    std::size_t skipped = 0;
    for (const auto& q : queries) {
        const RankedList* list = first.find(q.query_id);
        if (!qrels.has_positive(q.query_id, config.metrics.rel_threshold) || !list || list->empty()) {
            ++skipped;
            continue;
        }
        double label = ndcg_at_k(*list, qrels, q.query_id, 10, config.metric_options().gain);
        examples.push_back({q, *list, label});
    }
    if (skipped) log::info("qpp: skipped " + std::to_string(skipped) + " queries without positives or candidates");
    QppModel model = train_qpp(examples, config.qpp_train_options(), config.qpp.k, parse_orientation(config.qpp.orientation),
                               index);

    fs::path out = model_path(config, "qpp");
    ensure_parent(out);
    std::ostringstream buf;
    model.save(buf);
    io::write_file_atomic(out, buf.str());
    fs::path loss = out;
    loss.replace_extension(".loss.tsv");
    write_loss_curve(loss, model.core);
    const auto& curve = model.core.loss_curve;
    std::cout << "trained qpp on " << examples.size() << " queries; loss " << format_fixed(curve.front(), 4) << " -> "
              << format_fixed(curve.back(), 4) << "; median psi " << format_fixed(model.train_median_psi, 4) << " -> "
              << out.string() << '\n';
    return kExitOk;
}

int cmd_train(const PipelineConfig& config, const std::string& which)
{
    if (which == "br" || which == "sr") return train_ranker(config, which);
    if (which == "qpp") return train_qpp_model(config);
    throw InputError("unknown model '" + which + "' (expected br, sr or qpp)");
}

// ---- run ------------------------------------------------------------------

const std::vector<std::string> kRunMethods = {"bm25", "br", "sr", "bsf", "r_qpp", "w_qpps", "all"};

std::unique_ptr<Ranker> load_ranker(const PipelineConfig& config, const std::string& which, const fs::path& scores,
                                    const DocumentStore& corpus, const InvertedIndex& index)
{
    if (!scores.empty()) {
        RunList run = io::load_run(require_file(config, scores, "paths." + which + "_scores"));
        return std::make_unique<ScoreFileRanker>(run);
    }
    fs::path p = model_path(config, which);
    if (!fs::is_regular_file(p)) throw InputError(which + " model not found: " + p.string() + " (run 'hardrank train --which " + which + "')");
    return std::make_unique<ModelRanker>(RankerModel::load(p), corpus, index, config.bm25);
}

int cmd_run(const PipelineConfig& config, const std::string& method)
{
    if (std::find(kRunMethods.begin(), kRunMethods.end(), method) == kRunMethods.end()) {
        throw InputError("unknown method '" + method + "' (expected one of bm25, br, sr, bsf, r_qpp, w_qpps, all)");
    }
    const bool all = method == "all";
    const bool need_br = method != "bm25";
    const bool need_sr = method != "bm25" && method != "br";
    const bool need_qpp = all || method == "r_qpp" || method == "w_qpps";

    fs::path queries_path = require_file(config, config.paths.test_queries, "paths.test_queries");
    fs::path corpus_path = require_file(config, config.paths.corpus, "paths.corpus");
    // Resolve every input before anything is written.
    std::vector<FusionConfig> fusions;
    if (all || method == "bsf") fusions.push_back(config.fusion_config(FusionMethod::bsf));
    if (all || method == "r_qpp") fusions.push_back(config.fusion_config(FusionMethod::r_qpp));
    if (all || method == "w_qpps") fusions.push_back(config.fusion_config(FusionMethod::w_qpps));

    InvertedIndex index = load_index(config);
    DocumentStore corpus(io::load_corpus(corpus_path));
    auto queries = io::load_queries(queries_path);

    std::unique_ptr<Ranker> br, sr;
    if (need_br) br = load_ranker(config, "br", config.paths.br_scores, corpus, index);
    if (need_sr) sr = load_ranker(config, "sr", config.paths.sr_scores, corpus, index);

    std::unique_ptr<QppProvider> qpp;
    std::optional<double> train_median;
    if (need_qpp) {
        if (!config.paths.qpp_scores.empty()) {
            auto scores = io::load_qpp_scores(require_file(config, config.paths.qpp_scores, "paths.qpp_scores"));
            std::vector<double> values;
            for (const auto& [qid, s] : scores) values.push_back(s);
            if (!values.empty()) train_median = median(values);
            qpp = std::make_unique<FileQppProvider>(std::move(scores), "qpp_file");
        } else {
            fs::path p = model_path(config, "qpp");
            if (!fs::is_regular_file(p)) throw InputError("qpp model not found: " + p.string() + " (run 'hardrank train --which qpp')");
            QppModel model = QppModel::load(p);
            train_median = model.train_median_psi;
            qpp = std::make_unique<ModelQppProvider>(std::move(model), index);
        }
    }

    fs::path runs_dir = config.resolve(config.paths.runs_dir);
    ensure_dir(runs_dir);
    auto save = [&](const std::string& name, const RunList& run, const std::string& tag) {
        fs::path p = run_path(config, name);
        io::write_file_atomic(p, run_to_string(run, tag));
        std::cout << "wrote " << name << " (" << run.queries.size() << " queries) -> " << p.string() << '\n';
    };

    RunList first = search_all(index, queries, config.depth, config.bm25, "bm25");
    if (method == "bm25" || all) save("bm25", first, "bm25");
    if (method == "bm25") return kExitOk;

    RunList br_run = rerank_all(*br, queries, first, "br");
    if (method == "br" || all) save("br", br_run, "br");
    if (!sr) return kExitOk;
    RunList sr_run = rerank_all(*sr, queries, first, "sr");
    if (method == "sr" || all) save("sr", sr_run, "sr");

    std::map<std::string, double> psi;
    if (qpp) {
        psi = estimate_all(*qpp, queries, first);
        std::ostringstream buf;
        io::write_qpp_scores(buf, psi);
        fs::path p = runs_dir / "qpp.tsv";
        io::write_file_atomic(p, buf.str());
    }

    for (const auto& f : fusions) {
        const std::string name = to_string(f.method);
        switch (f.method) {
        case FusionMethod::bsf: {
            std::vector<std::string> ids;
            for (const auto& q : queries) ids.push_back(q.query_id);
            save(name, bsf(br_run, sr_run, f.normalize, ids), f.run_tag());
            break;
        }
        case FusionMethod::w_qpps:
            save(name, w_qpps(br_run, sr_run, psi, f.normalize), f.run_tag());
            break;
        case FusionMethod::r_qpp: {
            double tau = f.tau.resolve(train_median);
            RoutedRun routed = route_runs(br_run, sr_run, psi, tau);
            save(name, routed.run, f.run_tag());
            std::ostringstream buf;
            write_routing_log(buf, routed.decisions);
            fs::path p = runs_dir / "r_qpp.routing.tsv";
            io::write_file_atomic(p, buf.str());
            std::size_t to_sr = 0;
            for (const auto& d : routed.decisions) to_sr += d.specialized ? 1 : 0;
            std::cout << "routed " << to_sr << " of " << routed.decisions.size() << " queries to sr (tau "
                      << format_fixed(tau, 4) << ") -> " << p.string() << '\n';
            break;
        }
        }
    }
    return kExitOk;
}

// ---- eval -----------------------------------------------------------------

int cmd_eval(const PipelineConfig& config, const std::vector<std::string>& run_args, std::string baseline,
             const std::string& format, const std::string& output)
{
    fs::path qrels_path = require_file(config, config.paths.qrels, "paths.qrels");
    std::vector<std::pair<std::string, fs::path>> specs;
    if (run_args.empty()) {
        for (const std::string name : {"bm25", "br", "sr", "bsf", "r_qpp", "w_qpps"}) {
            fs::path p = run_path(config, name);
            if (fs::is_regular_file(p)) specs.emplace_back(name, p);
        }
        if (specs.empty()) throw InputError("no runs given and none found in " + config.resolve(config.paths.runs_dir).string());
        if (baseline.empty()) baseline = "br";
    } else {
        for (const auto& arg : run_args) {
            auto eq = arg.find('=');
            std::string name = eq == std::string::npos ? fs::path(arg).stem().string() : arg.substr(0, eq);
            fs::path p = eq == std::string::npos ? fs::path(arg) : fs::path(arg.substr(eq + 1));
            if (name.empty() || p.empty()) throw InputError("--run expects name=path, got '" + arg + "'");
            if (!fs::is_regular_file(p)) throw InputError("run file not found: " + p.string());
            for (const auto& [n, _] : specs) {
                if (n == name) throw InputError("run name '" + name + "' given twice");
            }
            specs.emplace_back(name, p);
        }
        if (baseline.empty()) baseline = specs.front().first;
    }
    if (format != "table" && format != "jsonl") throw InputError("--format must be 'table' or 'jsonl'");

    Qrels qrels = io::load_qrels(qrels_path);
    std::vector<NamedRun> runs;
    for (const auto& [name, p] : specs) runs.emplace_back(name, io::load_run(p));
    MetricReport report = build_report(runs, qrels, baseline, config.metric_options());

    std::string table = render_table(report);
    std::string jsonl = render_jsonl(report);
    std::cout << (format == "table" ? table : jsonl);
    if (!output.empty()) {
        fs::path p = output;
        ensure_parent(p);
        io::write_file_atomic(p, format == "table" ? table : jsonl);
    } else {
        fs::path dir = config.resolve(config.paths.reports_dir);
        ensure_dir(dir);
        io::write_file_atomic(dir / "report.txt", table);
        io::write_file_atomic(dir / "report.jsonl", jsonl);
    }
    if (report.has_comparison_errors()) {
        for (const auto& s : report.systems) {
            if (!s.comparison_error.empty()) std::cerr << "comparison failed for " << s.name << ": " << s.comparison_error << '\n';
        }
        return kExitInput;
    }
    return kExitOk;
}

// ---- config ---------------------------------------------------------------

int cmd_config(const Common& common, bool dump_defaults)
{
    if (dump_defaults) {
        std::cout << to_json(PipelineConfig{}).dump(2) << '\n';
        return kExitOk;
    }
    PipelineConfig config = load_pipeline_config(common, {});
    std::cout << to_json(config).dump(2) << '\n';
    return kExitOk;
}

} // namespace

int run_cli(int argc, const char* const* argv)
{
    CLI::App app{"Hardness-aware query routing and fusion for neural re-ranking", "hardrank"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "hardrank 0.1.0");

    Common common;

    bool force = false;
    std::string index_corpus, index_output;
    auto* index_cmd = app.add_subcommand("index", "Build the BM25 index from the corpus");
    add_common(*index_cmd, common);
    index_cmd->add_flag("--force", force, "Overwrite an existing index");
    index_cmd->add_option("--corpus", index_corpus, "Corpus JSONL (paths.corpus)");
    index_cmd->add_option("-o,--output", index_output, "Index file (paths.index)");

    std::string enrich_queries, enrich_output, enrich_generator, enrich_url, enrich_context;
    auto* enrich_cmd = app.add_subcommand("enrich", "Rewrite hard training queries with document context");
    add_common(*enrich_cmd, common);
    enrich_cmd->add_option("--queries", enrich_queries, "Queries TSV (paths.train_queries)");
    enrich_cmd->add_option("-o,--output", enrich_output, "Enriched TSV (paths.enriched)");
    enrich_cmd->add_option("--generator", enrich_generator, "stub or http (generator.kind)");
    enrich_cmd->add_option("--url", enrich_url, "Completion endpoint (generator.url)");
    enrich_cmd->add_option("--context", enrich_context, "bm25 or qrels (generator.context)");

    std::string which;
    auto* train_cmd = app.add_subcommand("train", "Train the base ranker, specialized ranker or QPP estimator");
    add_common(*train_cmd, common);
    train_cmd->add_option("-w,--which", which, "br, sr or qpp")->required();

    std::string method = "all", run_queries, run_output;
    auto* run_cmd = app.add_subcommand("run", "Produce run files for the test queries");
    add_common(*run_cmd, common);
    run_cmd->add_option("-m,--method", method, "bm25, br, sr, bsf, r_qpp, w_qpps or all");
    run_cmd->add_option("--queries", run_queries, "Queries TSV (paths.test_queries)");
    run_cmd->add_option("-o,--output", run_output, "Output directory (paths.runs_dir)");

    std::vector<std::string> eval_runs;
    std::string baseline, format = "table", eval_output;
    auto* eval_cmd = app.add_subcommand("eval", "Compare runs against a baseline");
    add_common(*eval_cmd, common);
    eval_cmd->add_option("-r,--run", eval_runs, "name=path; repeatable (default: runs in paths.runs_dir)");
    eval_cmd->add_option("-b,--baseline", baseline, "Baseline run name (default: br, or the first --run)");
    eval_cmd->add_option("--format", format, "table or jsonl");
    eval_cmd->add_option("-o,--output", eval_output, "Write the report here instead of paths.reports_dir");

    bool dump_defaults = false;
    auto* config_cmd = app.add_subcommand("config", "Print the effective configuration");
    add_common(*config_cmd, common);
    config_cmd->add_flag("--dump-defaults", dump_defaults, "Print every default setting");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitInput;
    }

    try {
        std::vector<std::string> flags;
        if (*index_cmd) {
            if (!index_corpus.empty()) flags.push_back(path_override("paths.corpus", index_corpus));
            if (!index_output.empty()) flags.push_back(path_override("paths.index", index_output));
            return cmd_index(load_pipeline_config(common, flags), force);
        }
        if (*enrich_cmd) {
            if (!enrich_queries.empty()) flags.push_back(path_override("paths.train_queries", enrich_queries));
            if (!enrich_output.empty()) flags.push_back(path_override("paths.enriched", enrich_output));
            if (!enrich_generator.empty()) flags.push_back("generator.kind=\"" + enrich_generator + "\"");
            if (!enrich_url.empty()) flags.push_back("generator.url=" + nlohmann::json(enrich_url).dump());
            if (!enrich_context.empty()) flags.push_back("generator.context=\"" + enrich_context + "\"");
            return cmd_enrich(load_pipeline_config(common, flags));
        }
        if (*train_cmd) return cmd_train(load_pipeline_config(common, flags), which);
        if (*run_cmd) {
            if (!run_queries.empty()) flags.push_back(path_override("paths.test_queries", run_queries));
            if (!run_output.empty()) flags.push_back(path_override("paths.runs_dir", run_output));
            return cmd_run(load_pipeline_config(common, flags), method);
        }
        if (*eval_cmd) return cmd_eval(load_pipeline_config(common, flags), eval_runs, baseline, format, eval_output);
        if (*config_cmd) return cmd_config(common, dump_defaults);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const RuntimeFailure& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitInput;
}

int run_cli(const std::vector<std::string>& args)
{
    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    for (const auto& a : args) argv.push_back(a.c_str());
    argv.push_back(nullptr);
    return run_cli(static_cast<int>(args.size()), argv.data());
}

} // namespace hardrank
