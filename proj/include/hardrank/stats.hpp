#pragma once

#include <span>
#include <string>

namespace hardrank {

/// (sys - base) / base * 100, rounded to one decimal as printed in result
/// tables. Throws InputError unless base > 0.
double relative_improvement(double sys, double base);
/// Same without rounding.
double relative_improvement_exact(double sys, double base);

enum class Significance { none, p90, p95 };

/// p < 0.05 -> p95, p < 0.10 -> p90.
Significance significance_level(double p);
/// "*" for 95%, "#" for 90%, "" otherwise.
std::string significance_marker(Significance s);

struct PairedTestResult {
    double t = 0.0;
    int df = 0;
    double p = 1.0;
    // Differences with zero spread: p is 1 if they are all zero, else 0.
    bool zero_variance = false;
    Significance level = Significance::none;
};

inline constexpr std::string_view kPairedTestName = "paired two-tailed t-test";

/// Two-tailed paired t-test on sys[i] - base[i]. Throws InputError on a
/// length mismatch or fewer than 2 pairs.
PairedTestResult paired_test(std::span<const double> sys, std::span<const double> base);

} // namespace hardrank
