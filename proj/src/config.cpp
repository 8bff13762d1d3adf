#include "hardrank/config.hpp"

#include <fstream>

#include "hardrank/errors.hpp"

namespace hardrank {

namespace {

using nlohmann::json;

void merge_checked(json& base, const json& user, const std::string& prefix)
{
    if (!user.is_object()) throw InputError("config" + (prefix.empty() ? "" : " key '" + prefix + "'") + " must be an object");
    for (const auto& [key, value] : user.items()) {
        const std::string path = prefix.empty() ? key : prefix + "." + key;
        if (!base.contains(key)) throw InputError("unknown config key '" + path + "'");
        if (base[key].is_object() && path != "fusion.tau") {
            merge_checked(base[key], value, path);
        } else {
            base[key] = value;
        }
    }
}

template <typename T>
T get(const json& j, const char* section, const char* key)
{
    try {
        return section ? j.at(section).at(key).get<T>() : j.at(key).get<T>();
    } catch (const json::exception&) {
        throw InputError(std::string("config key '") + (section ? std::string(section) + "." : "") + key +
                         "' has the wrong type");
    }
}

std::filesystem::path get_path(const json& j, const char* key) { return get<std::string>(j, "paths", key); }

} // namespace

nlohmann::json to_json(const PipelineConfig& c)
{
    json j;
    j["paths"] = {
        {"corpus", c.paths.corpus.string()},
        {"train_queries", c.paths.train_queries.string()},
        {"test_queries", c.paths.test_queries.string()},
        {"qrels", c.paths.qrels.string()},
        {"index", c.paths.index.string()},
        {"enriched", c.paths.enriched.string()},
        {"models_dir", c.paths.models_dir.string()},
        {"runs_dir", c.paths.runs_dir.string()},
        {"reports_dir", c.paths.reports_dir.string()},
        {"lexicon", c.paths.lexicon.string()},
        {"qpp_scores", c.paths.qpp_scores.string()},
        {"br_scores", c.paths.br_scores.string()},
        {"sr_scores", c.paths.sr_scores.string()},
    };
    j["bm25"] = {{"k1", c.bm25.k1}, {"b", c.bm25.b}};
    j["depth"] = c.depth;
    j["passage_window"] = c.passage_window;
    j["hardness"] = {{"max_token_count", c.hardness.max_token_count},
                     {"acronym_pattern", c.hardness.acronym_pattern},
                     {"min_context_terms", c.hardness.min_context_terms}};
    j["generator"] = {{"kind", c.generator.kind},
                      {"url", c.generator.url},
                      {"token_env", c.generator.token_env},
                      {"max_tokens", c.generator.max_tokens},
                      {"max_in_flight", c.generator.max_in_flight},
                      {"max_retries", c.generator.max_retries},
                      {"initial_backoff_ms", c.generator.initial_backoff_ms},
                      {"timeout_ms", c.generator.timeout_ms},
                      {"context", c.generator.context}};
    j["ranker"] = {{"epochs", c.ranker.epochs},
                   {"learning_rate", c.ranker.learning_rate},
                   {"label_threshold", c.ranker.label_threshold},
                   {"negatives_per_positive", c.ranker.negatives_per_positive},
                   {"pool_depth", c.ranker.pool_depth}};
    j["qpp"] = {{"k", c.qpp.k},
                {"epochs", c.qpp.epochs},
                {"learning_rate", c.qpp.learning_rate},
                {"orientation", c.qpp.orientation}};
    j["fusion"] = {{"normalize", c.fusion.normalize}, {"tau", c.fusion.tau}};
    j["metrics"] = {{"ndcg_k", c.metrics.ndcg_k},
                    {"gain", c.metrics.gain},
                    {"rr_cutoff", c.metrics.rr_cutoff},
                    {"rel_threshold", c.metrics.rel_threshold},
                    {"include_no_positive", c.metrics.include_no_positive}};
    j["seed"] = c.seed;
    j["threads"] = c.threads;
    return j;
}

PipelineConfig config_from_json(const nlohmann::json& user, const std::filesystem::path& base_dir)
{
    json j = to_json(PipelineConfig{});
    merge_checked(j, user, "");

    PipelineConfig c;
    c.base_dir = base_dir;
    c.paths.corpus = get_path(j, "corpus");
    c.paths.train_queries = get_path(j, "train_queries");
    c.paths.test_queries = get_path(j, "test_queries");
    c.paths.qrels = get_path(j, "qrels");
    c.paths.index = get_path(j, "index");
    c.paths.enriched = get_path(j, "enriched");
    c.paths.models_dir = get_path(j, "models_dir");
    c.paths.runs_dir = get_path(j, "runs_dir");
    c.paths.reports_dir = get_path(j, "reports_dir");
    c.paths.lexicon = get_path(j, "lexicon");
    c.paths.qpp_scores = get_path(j, "qpp_scores");
    c.paths.br_scores = get_path(j, "br_scores");
    c.paths.sr_scores = get_path(j, "sr_scores");

    c.bm25.k1 = get<double>(j, "bm25", "k1");
    c.bm25.b = get<double>(j, "bm25", "b");
    c.depth = get<std::size_t>(j, nullptr, "depth");
    c.passage_window = get<std::size_t>(j, nullptr, "passage_window");

    c.hardness.max_token_count = get<std::size_t>(j, "hardness", "max_token_count");
    c.hardness.acronym_pattern = get<bool>(j, "hardness", "acronym_pattern");
    c.hardness.min_context_terms = get<std::size_t>(j, "hardness", "min_context_terms");

    c.generator.kind = get<std::string>(j, "generator", "kind");
    c.generator.url = get<std::string>(j, "generator", "url");
    c.generator.token_env = get<std::string>(j, "generator", "token_env");
    c.generator.max_tokens = get<int>(j, "generator", "max_tokens");
    c.generator.max_in_flight = get<int>(j, "generator", "max_in_flight");
    c.generator.max_retries = get<int>(j, "generator", "max_retries");
    c.generator.initial_backoff_ms = get<int>(j, "generator", "initial_backoff_ms");
    c.generator.timeout_ms = get<int>(j, "generator", "timeout_ms");
    c.generator.context = get<std::string>(j, "generator", "context");

    c.ranker.epochs = get<int>(j, "ranker", "epochs");
    c.ranker.learning_rate = get<double>(j, "ranker", "learning_rate");
    c.ranker.label_threshold = get<int>(j, "ranker", "label_threshold");
    c.ranker.negatives_per_positive = get<int>(j, "ranker", "negatives_per_positive");
    c.ranker.pool_depth = get<std::size_t>(j, "ranker", "pool_depth");

    c.qpp.k = get<std::size_t>(j, "qpp", "k");
    c.qpp.epochs = get<int>(j, "qpp", "epochs");
    c.qpp.learning_rate = get<double>(j, "qpp", "learning_rate");
    c.qpp.orientation = get<std::string>(j, "qpp", "orientation");

    c.fusion.normalize = get<std::string>(j, "fusion", "normalize");
    c.fusion.tau = j["fusion"]["tau"];

    c.metrics.ndcg_k = get<std::size_t>(j, "metrics", "ndcg_k");
    c.metrics.gain = get<std::string>(j, "metrics", "gain");
    c.metrics.rr_cutoff = get<std::size_t>(j, "metrics", "rr_cutoff");
    c.metrics.rel_threshold = get<int>(j, "metrics", "rel_threshold");
    c.metrics.include_no_positive = get<bool>(j, "metrics", "include_no_positive");

    c.seed = get<std::uint64_t>(j, nullptr, "seed");
    c.threads = get<int>(j, nullptr, "threads");
    c.validate();
    return c;
}

PipelineConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw InputError("cannot open config '" + path.string() + "'");
    json j;
    try {
        j = json::parse(in, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        throw InputError("config '" + path.string() + "': " + e.what());
    }
    auto base = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
    return config_from_json(j, base);
}

void PipelineConfig::validate() const
{
    bm25.validate();
    if (depth < 1) throw InputError("depth must be >= 1");
    if (passage_window < 1) throw InputError("passage_window must be >= 1");
    hardness_rule().validate();
    if (generator.kind != "stub" && generator.kind != "http")
        throw InputError("generator.kind must be 'stub' or 'http'");
    if (generator.kind == "http" && generator.url.empty()) throw InputError("generator.url is required for kind 'http'");
    if (generator.context != "bm25" && generator.context != "qrels")
        throw InputError("generator.context must be 'bm25' or 'qrels'");
    if (generator.max_tokens < 1) throw InputError("generator.max_tokens must be >= 1");
    if (generator.max_in_flight < 1) throw InputError("generator.max_in_flight must be >= 1");
    if (generator.max_retries < 0) throw InputError("generator.max_retries must be >= 0");
    if (generator.initial_backoff_ms < 0 || generator.timeout_ms < 1)
        throw InputError("generator backoff/timeout out of range");
    if (ranker.epochs < 0 || qpp.epochs < 0) throw InputError("epochs must be >= 0");
    if (!(ranker.learning_rate > 0.0) || !(qpp.learning_rate > 0.0)) throw InputError("learning rates must be > 0");
    if (ranker.negatives_per_positive < 0) throw InputError("ranker.negatives_per_positive must be >= 0");
    if (ranker.pool_depth < 1) throw InputError("ranker.pool_depth must be >= 1");
    if (qpp.k < 1) throw InputError("qpp.k must be >= 1");
    parse_orientation(qpp.orientation);
    parse_normalization(fusion.normalize);
    fusion_config(FusionMethod::bsf);
    if (metrics.ndcg_k < 1) throw InputError("metrics.ndcg_k must be >= 1");
    if (metrics.gain != "exponential" && metrics.gain != "linear")
        throw InputError("metrics.gain must be 'exponential' or 'linear'");
    if (threads < 0) throw InputError("threads must be >= 0");
}

std::filesystem::path PipelineConfig::resolve(const std::filesystem::path& p) const
{
    if (p.empty() || p.is_absolute()) return p;
    return base_dir / p;
}

HardnessRule PipelineConfig::hardness_rule() const
{
    HardnessRule r;
    r.max_token_count = hardness.max_token_count;
    r.acronym_pattern = hardness.acronym_pattern;
    r.min_context_terms = hardness.min_context_terms;
    if (!paths.lexicon.empty()) r.lexicon = load_lexicon(resolve(paths.lexicon).string());
    return r;
}

EnrichOptions PipelineConfig::enrich_options(const Qrels* qrels) const
{
    EnrichOptions o;
    o.bm25 = bm25;
    o.context = generator.context == "qrels" ? ContextSource::best_judged : ContextSource::bm25_top1;
    o.qrels = qrels;
    o.max_tokens = generator.max_tokens;
    return o;
}

TrainOptions PipelineConfig::ranker_train_options() const { return {ranker.epochs, ranker.learning_rate, seed}; }

SamplingOptions PipelineConfig::sampling_options() const
{
    return {ranker.label_threshold, ranker.negatives_per_positive, ranker.pool_depth, seed};
}

TrainOptions PipelineConfig::qpp_train_options() const { return {qpp.epochs, qpp.learning_rate, seed}; }

FusionConfig PipelineConfig::fusion_config(FusionMethod method) const
{
    FusionConfig f;
    f.method = method;
    f.normalize = parse_normalization(fusion.normalize);
    if (fusion.tau.is_string() && fusion.tau.get<std::string>() == "train_median") {
        f.tau = TauPolicy::train_median();
    } else if (fusion.tau.is_number()) {
        f.tau = TauPolicy::fixed(fusion.tau.get<double>());
    } else {
        throw InputError("fusion.tau must be \"train_median\" or a number in [0,1]");
    }
    return f;
}

MetricOptions PipelineConfig::metric_options() const
{
    MetricOptions m;
    m.ndcg_k = metrics.ndcg_k;
    m.gain = metrics.gain == "linear" ? Gain::linear : Gain::exponential;
    m.rr_cutoff = metrics.rr_cutoff;
    m.rel_threshold = metrics.rel_threshold;
    m.include_no_positive = metrics.include_no_positive;
    return m;
}

void apply_override(nlohmann::json& j, const std::string& assignment)
{
    auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) throw InputError("override must look like key.path=value: '" + assignment + "'");
    const std::string key = assignment.substr(0, eq);
    const std::string raw = assignment.substr(eq + 1);
    json value;
    try {
        value = json::parse(raw);
    } catch (const json::parse_error&) {
        value = raw;
    }
    json* node = &j;
    std::size_t start = 0;
    for (;;) {
        auto dot = key.find('.', start);
        auto part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (part.empty()) throw InputError("bad override key '" + key + "'");
        if (dot == std::string::npos) {
            (*node)[part] = value;
            break;
        }
        node = &(*node)[part];
        if (!node->is_object() && !node->is_null()) throw InputError("override key '" + key + "' is not a section");
        start = dot + 1;
    }
}

} // namespace hardrank
