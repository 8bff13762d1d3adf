#include "hardrank/report.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "hardrank/errors.hpp"
#include "hardrank/text.hpp"

namespace hardrank {

bool MetricReport::has_comparison_errors() const
{
    return std::any_of(systems.begin(), systems.end(), [](const SystemSummary& s) { return !s.comparison_error.empty(); });
}

namespace {

double mean_of(const std::vector<double>& v)
{
    if (v.empty()) return 0.0;
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

MetricComparison compare(const std::vector<double>& sys, const std::vector<double>& base, std::string& error,
                         const char* metric)
{
    MetricComparison c;
    c.mean = mean_of(sys);
    double base_mean = mean_of(base);
    if (base_mean > 0.0) {
        c.delta_pct = relative_improvement(c.mean, base_mean);
    } else {
        error += std::string(error.empty() ? "" : "; ") + "baseline " + metric + " is 0";
    }
    if (sys.size() >= 2) {
        c.test = paired_test(sys, base);
    } else {
        error += std::string(error.empty() ? "" : "; ") + "fewer than 2 queries for the paired test";
    }
    return c;
}

std::string cell(const MetricComparison& c, bool is_baseline)
{
    std::string s = format_fixed(c.mean, 3);
    if (is_baseline) return s;
    if (c.delta_pct) {
        double d = *c.delta_pct;
        s += " (" + std::string(d >= 0 ? "+" : "") + format_fixed(d, 1) + ")";
    } else {
        s += " (n/a)";
    }
    s += significance_marker(c.test.level);
    return s;
}

} // namespace

MetricReport build_report(const std::vector<NamedRun>& runs, const Qrels& qrels, const std::string& baseline,
                          const MetricOptions& options)
{
    auto base_it = std::find_if(runs.begin(), runs.end(), [&](const NamedRun& r) { return r.first == baseline; });
    if (base_it == runs.end()) throw InputError("baseline '" + baseline + "' is not among the evaluated runs");

    MetricReport report;
    report.baseline = baseline;
    report.ndcg_k = options.ndcg_k;
    report.query_ids = evaluation_queries(qrels, options);
    for (const auto& [name, run] : runs) {
        if (report.per_query.contains(name)) throw InputError("run name '" + name + "' given twice");
        report.per_query[name] = evaluate_run(run, qrels, report.query_ids, options);
    }

    auto column = [&](const std::string& name, bool ndcg) {
        std::vector<double> v;
        v.reserve(report.query_ids.size());
        const auto& pq = report.per_query.at(name);
        for (const auto& q : report.query_ids) v.push_back(ndcg ? pq.at(q).ndcg : pq.at(q).rr);
        return v;
    };
    const auto base_ndcg = column(baseline, true);
    const auto base_rr = column(baseline, false);
    for (const auto& [name, run] : runs) {
        SystemSummary s;
        s.name = name;
        s.ndcg = compare(column(name, true), base_ndcg, s.comparison_error, "nDCG");
        s.rr = compare(column(name, false), base_rr, s.comparison_error, "RR");
        report.systems.push_back(std::move(s));
    }
    return report;
}

std::string render_table(const MetricReport& report)
{
    std::vector<std::vector<std::string>> rows;
    rows.push_back({"system", "RR", "nDCG@" + std::to_string(report.ndcg_k)});
    for (const auto& s : report.systems) {
        bool base = s.name == report.baseline;
        rows.push_back({s.name + (base ? " (baseline)" : ""), cell(s.rr, base), cell(s.ndcg, base)});
    }
    std::vector<std::size_t> width(3, 0);
    for (const auto& r : rows)
        for (std::size_t c = 0; c < r.size(); ++c) width[c] = std::max(width[c], r[c].size());

    std::ostringstream out;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t c = 0; c < rows[i].size(); ++c) {
            out << rows[i][c];
            if (c + 1 < rows[i].size()) out << std::string(width[c] - rows[i][c].size() + 2, ' ');
        }
        out << '\n';
        if (i == 0) out << std::string(width[0] + width[1] + width[2] + 4, '-') << '\n';
    }
    out << "queries: " << report.query_ids.size() << "; significance: " << report.test_name
        << ", * p<0.05, # p<0.10 vs " << report.baseline << '\n';
    return out.str();
}

namespace {

nlohmann::json comparison_json(const MetricComparison& c)
{
    nlohmann::json j;
    j["mean"] = std::round(c.mean * 1000.0) / 1000.0;
    j["mean_exact"] = c.mean;
    j["delta_pct"] = c.delta_pct ? nlohmann::json(*c.delta_pct) : nlohmann::json(nullptr);
    j["t"] = std::isfinite(c.test.t) ? nlohmann::json(c.test.t) : nlohmann::json(c.test.t > 0 ? "inf" : "-inf");
    j["df"] = c.test.df;
    j["p_value"] = c.test.p;
    j["significance"] = c.test.level == Significance::p95 ? "95" : c.test.level == Significance::p90 ? "90" : "none";
    return j;
}

} // namespace

std::string render_jsonl(const MetricReport& report)
{
    std::ostringstream out;
    for (const auto& s : report.systems) {
        nlohmann::json j;
        j["system"] = s.name;
        j["baseline"] = report.baseline;
        j["queries"] = report.query_ids.size();
        j["test"] = report.test_name;
        j["ndcg@" + std::to_string(report.ndcg_k)] = comparison_json(s.ndcg);
        j["rr"] = comparison_json(s.rr);
        if (!s.comparison_error.empty()) j["error"] = s.comparison_error;
        out << j.dump() << '\n';
    }
    return out.str();
}

} // namespace hardrank
