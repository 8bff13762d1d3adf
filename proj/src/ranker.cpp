#include "hardrank/ranker.hpp"

#include <algorithm>
#include <exception>
#include <fstream>
#include <istream>
#include <mutex>
#include <ostream>
#include <random>
#include <set>

#include "hardrank/errors.hpp"
#include "hardrank/text.hpp"

namespace hardrank {

RankerModel RankerModel::untrained(std::string name)
{
    RankerModel m;
    m.name = std::move(name);
    m.core.weights.assign(kRankerFeatureDim, 0.0);
    m.core.scaler = FeatureScaler::identity(kRankerFeatureDim);
    return m;
}

void RankerModel::save(std::ostream& out) const
{
    out << kFormatHeader << '\n';
    out << "kind ranker\n";
    out << "name " << (name.empty() ? "unnamed" : name) << '\n';
    core.write(out);
}

RankerModel RankerModel::load(std::istream& in)
{
    std::size_t lineno = 0;
    std::string line;
    auto expect = [&](std::string_view prefix) {
        if (!std::getline(in, line)) throw ParseError(lineno + 1, "unexpected end of model file");
        ++lineno;
        if (!line.starts_with(prefix)) throw ParseError(lineno, "expected '" + std::string(prefix) + "'");
        return line.substr(prefix.size());
    };
    if (expect(kFormatHeader) != "") throw ParseError(lineno, "unsupported model header");
    if (expect("kind ") != "ranker") throw ParseError(lineno, "not a ranker model");
    RankerModel m;
    m.name = expect("name ");
    m.core = LogisticModel::read(in, lineno);
    if (m.core.dim() != kRankerFeatureDim) throw ParseError(lineno, "ranker model must have 6 weights");
    return m;
}

void RankerModel::save(const std::filesystem::path& path) const
{
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw RuntimeFailure("cannot write model '" + path.string() + "'");
    save(out);
}

RankerModel RankerModel::load(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw InputError("cannot open model '" + path.string() + "'");
    try {
        return load(in);
    } catch (const ParseError& e) {
        throw ParseError(e.line(), e.detail(), path.string());
    }
}

double score(const RankerModel& model, const FeatureVector& features) { return model.core.predict(features); }

RankerModel train(std::span<const TrainingInstance> instances, const TrainOptions& options, std::string name)
{
    if (instances.empty()) throw InputError("cannot train a ranker on zero instances");
    FeatureMatrix x(kRankerFeatureDim);
    std::vector<double> y;
    y.reserve(instances.size());
    bool has_pos = false;
    bool has_neg = false;
    for (const auto& inst : instances) {
        if (inst.label != 0 && inst.label != 1) throw InputError("training labels must be 0 or 1");
        x.add_row(inst.features);
        y.push_back(inst.label);
        (inst.label ? has_pos : has_neg) = true;
    }
    if (!has_pos || !has_neg) throw InputError("training set has a single class; both labels are required");
    RankerModel m;
    m.name = std::move(name);
    m.core = LogisticModel::fit(x, y, options);
    return m;
}

std::vector<TrainingInstance> build_training_instances(std::span<const Query> queries, const Qrels& qrels,
                                                       const RunList& pool, const DocumentStore& corpus,
                                                       const InvertedIndex& index, const Bm25Params& params,
                                                       const SamplingOptions& options)
{
    std::vector<TrainingInstance> out;
    for (const auto& q : queries) {
        const auto* judged = qrels.judgments(q.query_id);
        if (!judged) continue;
        std::vector<std::string> positives;
        for (const auto& [doc, grade] : *judged)
            if (grade >= options.label_threshold && corpus.find(doc)) positives.push_back(doc);
        if (positives.empty()) continue;

        std::vector<std::string> negatives;
        if (const auto* list = pool.find(q.query_id)) {
            for (std::size_t i = 0; i < list->size() && i < options.pool_depth; ++i) {
                const auto& doc = (*list)[i].doc_id;
                if (qrels.grade_or_zero(q.query_id, doc) < options.label_threshold && corpus.find(doc))
                    negatives.push_back(doc);
            }
        }
        // Fisher-Yates with raw engine output keeps the draw identical across
        // standard library implementations.
        std::mt19937_64 rng(options.seed ^ fnv1a(q.query_id));
        for (std::size_t i = negatives.size(); i > 1; --i) std::swap(negatives[i - 1], negatives[rng() % i]);
        auto wanted = positives.size() * static_cast<std::size_t>(std::max(0, options.negatives_per_positive));
        if (negatives.size() > wanted) negatives.resize(wanted);
        std::sort(negatives.begin(), negatives.end());

        for (const auto& doc : positives)
            out.push_back({q.query_id, doc, extract_features(q.text, corpus.at(doc), index, params), 1});
        for (const auto& doc : negatives)
            out.push_back({q.query_id, doc, extract_features(q.text, corpus.at(doc), index, params), 0});
    }
    return out;
}

RankedList rerank(const RankerModel& model, const Query& query, const RankedList& candidates,
                  const DocumentStore& corpus, const InvertedIndex& index, const Bm25Params& params)
{
    RankedList out;
    out.reserve(candidates.size());
    for (const auto& c : candidates) {
        const Document* doc = corpus.find(c.doc_id);
        if (!doc) throw InputError("rerank: doc_id '" + c.doc_id + "' not in corpus (query " + query.query_id + ")");
        out.push_back(RunRecord{c.doc_id, score(model, extract_features(query.text, *doc, index, params)), 0});
    }
    sort_and_rank(out);
    return out;
}

ModelRanker::ModelRanker(RankerModel model, const DocumentStore& corpus, const InvertedIndex& index, Bm25Params params)
    : model_(std::move(model)), corpus_(corpus), index_(index), params_(params)
{
}

RankedList ModelRanker::rerank(const Query& query, const RankedList& candidates) const
{
    return hardrank::rerank(model_, query, candidates, corpus_, index_, params_);
}

ScoreFileRanker::ScoreFileRanker(std::map<std::pair<std::string, std::string>, double> scores, std::string name)
    : scores_(std::move(scores)), name_(std::move(name))
{
}

ScoreFileRanker::ScoreFileRanker(const RunList& run) : name_(run.tag.empty() ? "scores" : run.tag)
{
    for (const auto& [qid, list] : run.queries)
        for (const auto& r : list) scores_[{qid, r.doc_id}] = r.score;
}

RankedList ScoreFileRanker::rerank(const Query& query, const RankedList& candidates) const
{
    RankedList out;
    out.reserve(candidates.size());
    for (const auto& c : candidates) {
        auto it = scores_.find({query.query_id, c.doc_id});
        if (it == scores_.end())
            throw InputError("no score for (" + query.query_id + ", " + c.doc_id + ") in " + name_);
        out.push_back(RunRecord{c.doc_id, it->second, 0});
    }
    sort_and_rank(out);
    return out;
}

RunList rerank_all(const Ranker& ranker, std::span<const Query> queries, const RunList& candidates,
                   const std::string& tag)
{
    std::vector<RankedList> lists(queries.size());
    std::exception_ptr error;
    std::mutex error_mutex;
    const auto n = static_cast<std::ptrdiff_t>(queries.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        try {
            if (const auto* c = candidates.find(queries[i].query_id)) lists[i] = ranker.rerank(queries[i], *c);
        } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);

    RunList run;
    run.tag = tag;
    for (std::size_t i = 0; i < queries.size(); ++i) run.queries[queries[i].query_id] = std::move(lists[i]);
    return run;
}

RunList rerank_all_serial(const Ranker& ranker, std::span<const Query> queries, const RunList& candidates,
                          const std::string& tag)
{
    RunList run;
    run.tag = tag;
    for (const auto& q : queries) {
        const auto* c = candidates.find(q.query_id);
        run.queries[q.query_id] = c ? ranker.rerank(q, *c) : RankedList{};
    }
    return run;
}

} // namespace hardrank
