#include "hardrank/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "hardrank/errors.hpp"

namespace hardrank {

double gain_of(int grade, Gain gain)
{
    if (grade <= 0) return 0.0;
    return gain == Gain::exponential ? std::exp2(static_cast<double>(grade)) - 1.0 : static_cast<double>(grade);
}

double ndcg_at_k(const RankedList& ranking, const Qrels& qrels, const std::string& query_id, std::size_t k, Gain gain)
{
    if (k == 0) throw InputError("ndcg cutoff must be >= 1");
    const auto* judged = qrels.judgments(query_id);
    if (!judged) return 0.0;

    std::vector<int> grades;
    grades.reserve(judged->size());
    for (const auto& [doc, g] : *judged) grades.push_back(g);
    std::sort(grades.begin(), grades.end(), std::greater<>());
    double ideal = 0.0;
    for (std::size_t i = 0; i < grades.size() && i < k; ++i)
        ideal += gain_of(grades[i], gain) / std::log2(static_cast<double>(i) + 2.0);
    if (ideal <= 0.0) return 0.0;

    double dcg = 0.0;
    for (std::size_t i = 0; i < ranking.size() && i < k; ++i) {
        auto g = judged->find(ranking[i].doc_id);
        if (g != judged->end()) dcg += gain_of(g->second, gain) / std::log2(static_cast<double>(i) + 2.0);
    }
    return dcg / ideal;
}

double reciprocal_rank(const RankedList& ranking, const Qrels& qrels, const std::string& query_id, std::size_t cutoff,
                       int rel_threshold)
{
    const auto* judged = qrels.judgments(query_id);
    if (!judged) return 0.0;
    const std::size_t limit = cutoff == 0 ? ranking.size() : std::min(cutoff, ranking.size());
    for (std::size_t i = 0; i < limit; ++i) {
        auto g = judged->find(ranking[i].doc_id);
        if (g != judged->end() && g->second >= rel_threshold) return 1.0 / static_cast<double>(i + 1);
    }
    return 0.0;
}

std::vector<std::string> evaluation_queries(const Qrels& qrels, const MetricOptions& options)
{
    std::vector<std::string> out;
    for (const auto& [qid, docs] : qrels.all())
        if (options.include_no_positive || qrels.has_positive(qid, 1)) out.push_back(qid);
    return out;
}

namespace {

QueryMetrics metrics_for(const RunList& run, const Qrels& qrels, const std::string& qid, const MetricOptions& o)
{
    static const RankedList kEmpty;
    const auto* list = run.find(qid);
    const auto& ranking = list ? *list : kEmpty;
    return QueryMetrics{ndcg_at_k(ranking, qrels, qid, o.ndcg_k, o.gain),
                        reciprocal_rank(ranking, qrels, qid, o.rr_cutoff, o.rel_threshold)};
}

} // namespace

std::map<std::string, QueryMetrics> evaluate_run(const RunList& run, const Qrels& qrels,
                                                 std::span<const std::string> query_ids, const MetricOptions& options)
{
    if (options.ndcg_k == 0) throw InputError("ndcg cutoff must be >= 1");
    std::vector<QueryMetrics> values(query_ids.size());
    const auto n = static_cast<std::ptrdiff_t>(query_ids.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) values[i] = metrics_for(run, qrels, query_ids[i], options);
    std::map<std::string, QueryMetrics> out;
    for (std::size_t i = 0; i < query_ids.size(); ++i) out[query_ids[i]] = values[i];
    return out;
}

std::map<std::string, QueryMetrics> evaluate_run_serial(const RunList& run, const Qrels& qrels,
                                                        std::span<const std::string> query_ids,
                                                        const MetricOptions& options)
{
    if (options.ndcg_k == 0) throw InputError("ndcg cutoff must be >= 1");
    std::map<std::string, QueryMetrics> out;
    for (const auto& qid : query_ids) out[qid] = metrics_for(run, qrels, qid, options);
    return out;
}

} // namespace hardrank
