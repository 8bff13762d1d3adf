#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hardrank/qpp.hpp"
#include "hardrank/ranker.hpp"
#include "hardrank/types.hpp"

namespace hardrank {

enum class FusionMethod { bsf, r_qpp, w_qpps };
enum class Normalization { none, per_query_min_max };

std::string to_string(FusionMethod m);
std::string to_string(Normalization n);
FusionMethod parse_fusion_method(const std::string& s);
Normalization parse_normalization(const std::string& s);

/// Routing threshold: a fixed value or the median training-set psi.
struct TauPolicy {
    enum class Kind { fixed, train_median };
    Kind kind = Kind::train_median;
    double value = 0.5;

    static TauPolicy fixed(double v);
    static TauPolicy train_median() { return {}; }
    /// Throws InputError when the policy needs a median that is not available.
    double resolve(std::optional<double> train_median_psi) const;
};

struct FusionConfig {
    FusionMethod method = FusionMethod::w_qpps;
    Normalization normalize = Normalization::per_query_min_max;
    TauPolicy tau;

    /// Tag for output runs: method name plus a short hash of the settings.
    std::string run_tag() const;
};

/// Min-max to [0,1] preserving order; a constant list maps to 0.5.
RankedList normalize_scores(const RankedList& list);

/// Per-document inputs and output of one fusion.
struct ScoredDoc {
    std::string doc_id;
    double s_br = 0.0;
    double s_sr = 0.0;
    double psi = 0.0;
    double fused = 0.0;
};

/// Balanced score fusion (CombSUM): fused = s_br + s_sr, where a document
/// missing from one list contributes 0 for that side. Every id in
/// `requested` must occur in at least one run.
RunList bsf(const RunList& br, const RunList& sr, Normalization normalize,
            std::span<const std::string> requested = {});

/// Weighted QPP scoring: fused = psi * s_sr + (1 - psi) * s_br. Both runs
/// must hold the same candidate set for every query and psi must be in [0,1].
RunList w_qpps(const RunList& br, const RunList& sr, const std::map<std::string, double>& psi,
               Normalization normalize);

/// The per-document breakdown behind w_qpps for one query.
std::vector<ScoredDoc> w_qpps_detail(const RankedList& br, const RankedList& sr, double psi, Normalization normalize,
                                     const std::string& query_id = {});

struct RouteDecision {
    std::string query_id;
    double psi = 0.0;
    bool specialized = false;
};

struct RoutedRun {
    RunList run;
    std::vector<RouteDecision> decisions;
};

/// Routing: a query with psi >= tau gets the specialized ranker's list for
/// its candidates, any other query the base ranker's. Each query comes from
/// exactly one ranker.
RoutedRun route_qpp(const Ranker& br, const Ranker& sr, const QppProvider& provider, std::span<const Query> queries,
                    const RunList& candidates, double tau);

/// Routing over already re-ranked runs.
RoutedRun route_runs(const RunList& br, const RunList& sr, const std::map<std::string, double>& psi, double tau);

/// `<qid>\t<psi>\t<sr|br>` per line.
void write_routing_log(std::ostream& out, std::span<const RouteDecision> decisions);

} // namespace hardrank
