#include "hardrank/fusion.hpp"

#include <algorithm>
#include <cstdio>
#include <exception>
#include <mutex>
#include <ostream>
#include <set>
#include <unordered_map>

#include "hardrank/errors.hpp"
#include "hardrank/text.hpp"

namespace hardrank {

std::string to_string(FusionMethod m)
{
    switch (m) {
    case FusionMethod::bsf: return "bsf";
    case FusionMethod::r_qpp: return "r_qpp";
    case FusionMethod::w_qpps: return "w_qpps";
    }
    return "unknown";
}

std::string to_string(Normalization n) { return n == Normalization::none ? "none" : "per_query_min_max"; }

FusionMethod parse_fusion_method(const std::string& s)
{
    if (s == "bsf") return FusionMethod::bsf;
    if (s == "r_qpp") return FusionMethod::r_qpp;
    if (s == "w_qpps") return FusionMethod::w_qpps;
    throw InputError("unknown fusion method '" + s + "' (expected bsf, r_qpp or w_qpps)");
}

Normalization parse_normalization(const std::string& s)
{
    if (s == "none") return Normalization::none;
    if (s == "per_query_min_max") return Normalization::per_query_min_max;
    throw InputError("unknown normalization '" + s + "' (expected none or per_query_min_max)");
}

TauPolicy TauPolicy::fixed(double v)
{
    if (!(v >= 0.0 && v <= 1.0)) throw InputError("routing threshold must be in [0,1]");
    return TauPolicy{Kind::fixed, v};
}

double TauPolicy::resolve(std::optional<double> train_median_psi) const
{
    if (kind == Kind::fixed) return value;
    if (!train_median_psi) throw InputError("tau policy train_median needs training-set psi values");
    return *train_median_psi;
}

std::string FusionConfig::run_tag() const
{
    std::string settings = to_string(method) + "|" + to_string(normalize) + "|" +
                           (tau.kind == TauPolicy::Kind::fixed ? "fixed:" + format_double(tau.value) : "train_median");
    char hex[9];
    std::snprintf(hex, sizeof hex, "%08llx", static_cast<unsigned long long>(fnv1a(settings) & 0xffffffffULL));
    return to_string(method) + "-" + hex;
}

RankedList normalize_scores(const RankedList& list)
{
    RankedList out = list;
    if (out.empty()) return out;
    auto [lo, hi] = std::minmax_element(out.begin(), out.end(),
                                        [](const RunRecord& a, const RunRecord& b) { return a.score < b.score; });
    const double min = lo->score;
    const double range = hi->score - min;
    for (auto& r : out) r.score = range > 0.0 ? (r.score - min) / range : 0.5;
    return out;
}

namespace {

RankedList prepared(const RankedList* list, Normalization n)
{
    if (!list) return {};
    return n == Normalization::per_query_min_max ? normalize_scores(*list) : *list;
}

std::set<std::string> query_union(const RunList& a, const RunList& b)
{
    std::set<std::string> ids;
    for (const auto& [q, l] : a.queries) ids.insert(q);
    for (const auto& [q, l] : b.queries) ids.insert(q);
    return ids;
}

} // namespace

RunList bsf(const RunList& br, const RunList& sr, Normalization normalize, std::span<const std::string> requested)
{
    for (const auto& q : requested)
        if (!br.find(q) && !sr.find(q)) throw InputError("bsf: query '" + q + "' is in neither run");

    RunList out;
    out.tag = "bsf";
    for (const auto& qid : query_union(br, sr)) {
        auto a = prepared(br.find(qid), normalize);
        auto b = prepared(sr.find(qid), normalize);
        std::map<std::string, double> fused;
        for (const auto& r : a) fused[r.doc_id] += r.score;
        for (const auto& r : b) fused[r.doc_id] += r.score;
        RankedList list;
        list.reserve(fused.size());
        for (const auto& [doc, s] : fused) list.push_back(RunRecord{doc, s, 0});
        sort_and_rank(list);
        out.queries[qid] = std::move(list);
    }
    return out;
}

std::vector<ScoredDoc> w_qpps_detail(const RankedList& br, const RankedList& sr, double psi, Normalization normalize,
                                     const std::string& query_id)
{
    if (!(psi >= 0.0 && psi <= 1.0))
        throw InputError("w_qpps: psi " + format_double(psi) + " outside [0,1] for query '" + query_id + "'");
    auto a = prepared(&br, normalize);
    auto b = prepared(&sr, normalize);

    std::unordered_map<std::string, double> sr_scores;
    for (const auto& r : b) sr_scores.emplace(r.doc_id, r.score);
    std::set<std::string> br_ids;
    for (const auto& r : a) br_ids.insert(r.doc_id);
    std::vector<std::string> only_br;
    std::vector<std::string> only_sr;
    for (const auto& r : a)
        if (!sr_scores.contains(r.doc_id)) only_br.push_back(r.doc_id);
    for (const auto& r : b)
        if (!br_ids.contains(r.doc_id)) only_sr.push_back(r.doc_id);
    if (!only_br.empty() || !only_sr.empty()) {
        std::sort(only_br.begin(), only_br.end());
        std::sort(only_sr.begin(), only_sr.end());
        throw InputError("w_qpps: candidate sets differ for query '" + query_id + "': only in BR [" +
                         join(only_br, " ") + "], only in SR [" + join(only_sr, " ") + "]");
    }

    std::vector<ScoredDoc> out;
    out.reserve(a.size());
    for (const auto& r : a) {
        ScoredDoc d;
        d.doc_id = r.doc_id;
        d.s_br = r.score;
        d.s_sr = sr_scores.at(r.doc_id);
        d.psi = psi;
        d.fused = psi * d.s_sr + (1.0 - psi) * d.s_br;
        out.push_back(std::move(d));
    }
    return out;
}

RunList w_qpps(const RunList& br, const RunList& sr, const std::map<std::string, double>& psi, Normalization normalize)
{
    static const RankedList kEmpty;
    RunList out;
    out.tag = "w_qpps";
    for (const auto& qid : query_union(br, sr)) {
        auto p = psi.find(qid);
        if (p == psi.end()) throw InputError("w_qpps: no psi for query '" + qid + "'");
        const auto* a = br.find(qid);
        const auto* b = sr.find(qid);
        auto detail = w_qpps_detail(a ? *a : kEmpty, b ? *b : kEmpty, p->second, normalize, qid);
        RankedList list;
        list.reserve(detail.size());
        for (const auto& d : detail) list.push_back(RunRecord{d.doc_id, d.fused, 0});
        sort_and_rank(list);
        out.queries[qid] = std::move(list);
    }
    return out;
}

RoutedRun route_qpp(const Ranker& br, const Ranker& sr, const QppProvider& provider, std::span<const Query> queries,
                    const RunList& candidates, double tau)
{
    if (!(tau >= 0.0 && tau <= 1.0)) throw InputError("routing threshold must be in [0,1]");
    std::vector<RankedList> lists(queries.size());
    std::vector<RouteDecision> decisions(queries.size());
    std::exception_ptr error;
    std::mutex error_mutex;
    const auto n = static_cast<std::ptrdiff_t>(queries.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const Query& q = queries[i];
        try {
            const auto* cand = candidates.find(q.query_id);
            if (!cand) throw InputError("route_qpp: no candidates for query '" + q.query_id + "'");
            QppEstimate est;
            try {
                est = provider.estimate(q, *cand);
            } catch (const std::exception& e) {
                throw InputError("route_qpp: missing qpp estimate for query '" + q.query_id + "': " + e.what());
            }
            decisions[i] = RouteDecision{q.query_id, est.psi, est.psi >= tau};
            lists[i] = decisions[i].specialized ? sr.rerank(q, *cand) : br.rerank(q, *cand);
        } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);

    RoutedRun out;
    out.run.tag = "r_qpp";
    for (std::size_t i = 0; i < queries.size(); ++i) out.run.queries[queries[i].query_id] = std::move(lists[i]);
    out.decisions = std::move(decisions);
    return out;
}

RoutedRun route_runs(const RunList& br, const RunList& sr, const std::map<std::string, double>& psi, double tau)
{
    if (!(tau >= 0.0 && tau <= 1.0)) throw InputError("routing threshold must be in [0,1]");
    RoutedRun out;
    out.run.tag = "r_qpp";
    for (const auto& qid : query_union(br, sr)) {
        auto p = psi.find(qid);
        if (p == psi.end()) throw InputError("route: missing qpp estimate for query '" + qid + "'");
        bool to_sr = p->second >= tau;
        const auto* chosen = to_sr ? sr.find(qid) : br.find(qid);
        out.run.queries[qid] = chosen ? *chosen : RankedList{};
        out.decisions.push_back(RouteDecision{qid, p->second, to_sr});
    }
    return out;
}

void write_routing_log(std::ostream& out, std::span<const RouteDecision> decisions)
{
    for (const auto& d : decisions)
        out << d.query_id << '\t' << format_double(d.psi) << '\t' << (d.specialized ? "sr" : "br") << '\n';
}

} // namespace hardrank
