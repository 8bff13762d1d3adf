#include "hardrank/stats.hpp"

#include <cmath>
#include <limits>

#include <boost/math/distributions/students_t.hpp>

#include "hardrank/errors.hpp"

namespace hardrank {

double relative_improvement_exact(double sys, double base)
{
    if (!(base > 0.0)) throw InputError("relative improvement needs a positive baseline");
    return (sys - base) / base * 100.0;
}

double relative_improvement(double sys, double base)
{
    double r = std::round(relative_improvement_exact(sys, base) * 10.0) / 10.0;
    return r == 0.0 ? 0.0 : r;
}

Significance significance_level(double p)
{
    if (p < 0.05) return Significance::p95;
    if (p < 0.10) return Significance::p90;
    return Significance::none;
}

std::string significance_marker(Significance s)
{
    switch (s) {
    case Significance::p95: return "*";
    case Significance::p90: return "#";
    case Significance::none: return "";
    }
    return "";
}

PairedTestResult paired_test(std::span<const double> sys, std::span<const double> base)
{
    if (sys.size() != base.size()) throw InputError("paired_test: vectors differ in length");
    if (sys.size() < 2) throw InputError("paired_test: need at least 2 pairs");
    const std::size_t n = sys.size();
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += sys[i] - base[i];
    mean /= static_cast<double>(n);
    double ss = 0.0;
    double max_abs = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double d = sys[i] - base[i] - mean;
        ss += d * d;
        max_abs = std::max(max_abs, std::abs(sys[i] - base[i]));
    }
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));

    PairedTestResult r;
    r.df = static_cast<int>(n - 1);
    // spread at rounding-noise level counts as none
    if (sd <= 1e-12 * std::max(1.0, max_abs)) {
        r.zero_variance = true;
        if (max_abs == 0.0) {
            r.t = 0.0;
            r.p = 1.0;
        } else {
            r.t = mean > 0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
            r.p = 0.0;
        }
    } else {
        r.t = mean / (sd / std::sqrt(static_cast<double>(n)));
        boost::math::students_t dist(static_cast<double>(r.df));
        r.p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(r.t)));
        r.p = std::min(1.0, r.p);
    }
    r.level = significance_level(r.p);
    return r;
}

} // namespace hardrank
