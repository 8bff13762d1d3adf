#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hardrank/metrics.hpp"
#include "hardrank/stats.hpp"
#include "hardrank/types.hpp"

namespace hardrank {

struct MetricComparison {
    double mean = 0.0;
    // Relative % vs the baseline, one decimal; empty when the baseline mean is 0.
    std::optional<double> delta_pct;
    PairedTestResult test;
};

struct SystemSummary {
    std::string name;
    MetricComparison ndcg;
    MetricComparison rr;
    // Set when a comparison could not be computed (e.g. zero baseline).
    std::string comparison_error;
};

struct MetricReport {
    std::string baseline;
    std::string test_name{kPairedTestName};
    std::size_t ndcg_k = 10;
    std::vector<std::string> query_ids;
    std::map<std::string, std::map<std::string, QueryMetrics>> per_query;
    std::vector<SystemSummary> systems;

    bool has_comparison_errors() const;
};

using NamedRun = std::pair<std::string, RunList>;

/// Evaluates every run over the same query set and compares each one with
/// `baseline`. Throws InputError if the baseline is not among `runs`.
MetricReport build_report(const std::vector<NamedRun>& runs, const Qrels& qrels, const std::string& baseline,
                          const MetricOptions& options);

/// Aligned table: means to 3 decimals, deltas to 1 decimal, "*" / "#" for
/// significance at 95% / 90%.
std::string render_table(const MetricReport& report);
/// One JSON object per system.
std::string render_jsonl(const MetricReport& report);

} // namespace hardrank
