// Independent reference computations used as test oracles. Nothing here
// calls into the library under test.
#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace oracle {

inline double dcg(const std::vector<std::string>& ranking, const std::map<std::string, int>& grades, std::size_t k,
                  bool exponential = true)
{
    double total = 0.0;
    for (std::size_t i = 0; i < ranking.size() && i < k; ++i) {
        auto it = grades.find(ranking[i]);
        int g = it == grades.end() ? 0 : it->second;
        double gain = exponential ? std::pow(2.0, g) - 1.0 : g;
        total += gain / std::log2(static_cast<double>(i) + 2.0);
    }
    return total;
}

/// Ideal DCG found by trying every distinct ordering of the judged grades.
/// Documents with equal grades are interchangeable, so permuting the grade
/// multiset covers every ranking of the judged documents.
inline double brute_force_idcg(const std::map<std::string, int>& grades, std::size_t k, bool exponential = true)
{
    std::vector<int> g;
    for (const auto& [d, v] : grades) g.push_back(v);
    std::sort(g.begin(), g.end());
    double best = 0.0;
    do {
        double total = 0.0;
        for (std::size_t i = 0; i < g.size() && i < k; ++i) {
            double gain = exponential ? std::pow(2.0, g[i]) - 1.0 : static_cast<double>(g[i]);
            total += gain / std::log2(static_cast<double>(i) + 2.0);
        }
        best = std::max(best, total);
    } while (std::next_permutation(g.begin(), g.end()));
    return best;
}

inline double ndcg(const std::vector<std::string>& ranking, const std::map<std::string, int>& grades, std::size_t k,
                   bool exponential = true)
{
    double ideal = brute_force_idcg(grades, k, exponential);
    if (ideal <= 0.0) return 0.0;
    return dcg(ranking, grades, k, exponential) / ideal;
}

inline double rr(const std::vector<std::string>& ranking, const std::map<std::string, int>& grades,
                 std::size_t cutoff = 0, int threshold = 1)
{
    for (std::size_t i = 0; i < ranking.size(); ++i) {
        if (cutoff && i >= cutoff) break;
        auto it = grades.find(ranking[i]);
        if (it != grades.end() && it->second >= threshold) return 1.0 / static_cast<double>(i + 1);
    }
    return 0.0;
}

/// BM25 contribution of one term, written straight from the formula.
inline double bm25_term(double tf, double df, double n_docs, double len, double avglen, double k1, double b)
{
    double idf = std::log((n_docs - df + 0.5) / (df + 0.5));
    if (idf < 0.0) idf = 0.0;
    return idf * tf * (k1 + 1.0) / (tf + k1 * (1.0 - b + b * len / avglen));
}

/// Two-tailed p of Student's t by Simpson integration of the density.
inline double t_two_tailed_p(double t, int df)
{
    const double v = df;
    const double logc = std::lgamma((v + 1.0) / 2.0) - std::lgamma(v / 2.0) - 0.5 * std::log(v * M_PI);
    auto pdf = [&](double x) { return std::exp(logc - (v + 1.0) / 2.0 * std::log1p(x * x / v)); };
    const double a = 0.0;
    const double b = std::fabs(t);
    const int n = 200000;
    const double h = (b - a) / n;
    double s = pdf(a) + pdf(b);
    for (int i = 1; i < n; ++i) s += pdf(a + i * h) * (i % 2 ? 4.0 : 2.0);
    const double central = s * h / 3.0;
    return 1.0 - 2.0 * central;
}

inline double paired_t(const std::vector<double>& d)
{
    double n = static_cast<double>(d.size());
    double mean = 0.0;
    for (double x : d) mean += x;
    mean /= n;
    double ss = 0.0;
    for (double x : d) ss += (x - mean) * (x - mean);
    double sd = std::sqrt(ss / (n - 1.0));
    return mean / (sd / std::sqrt(n));
}

inline double mean_bce(const std::vector<std::vector<double>>& z, const std::vector<double>& y,
                       const std::vector<double>& w, double b)
{
    double total = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        double s = b;
        for (std::size_t j = 0; j < w.size(); ++j) s += w[j] * z[i][j];
        double p = 1.0 / (1.0 + std::exp(-s));
        total += -(y[i] * std::log(p) + (1.0 - y[i]) * std::log(1.0 - p));
    }
    return total / static_cast<double>(z.size());
}

/// Central finite-difference gradient of f at x.
inline std::vector<double> central_difference(const std::function<double(const std::vector<double>&)>& f,
                                              std::vector<double> x, double h = 1e-5)
{
    std::vector<double> g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double orig = x[i];
        x[i] = orig + h;
        const double up = f(x);
        x[i] = orig - h;
        const double down = f(x);
        x[i] = orig;
        g[i] = (up - down) / (2.0 * h);
    }
    return g;
}

inline double relative_error(double analytic, double numeric)
{
    return std::fabs(analytic - numeric) / std::max({1e-8, std::fabs(analytic), std::fabs(numeric)});
}

/// A fresh directory removed on destruction.
class TempDir {
public:
    TempDir()
    {
        static std::mt19937_64 rng(std::random_device{}());
        path_ = std::filesystem::temp_directory_path() / ("hardrank-test-" + std::to_string(rng()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir()
    {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline void write_text(const std::filesystem::path& p, const std::string& text)
{
    std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    out << text;
}

inline std::string read_text(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace oracle
