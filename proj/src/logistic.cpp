#include "hardrank/logistic.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>

#include "hardrank/errors.hpp"
#include "hardrank/text.hpp"

namespace hardrank {

void FeatureMatrix::add_row(std::span<const double> row)
{
    if (row.size() != cols_) throw InputError("feature row has wrong dimension");
    data_.insert(data_.end(), row.begin(), row.end());
}

FeatureScaler FeatureScaler::fit(const FeatureMatrix& x)
{
    FeatureScaler s;
    const std::size_t d = x.cols();
    const std::size_t n = x.rows();
    s.mean.assign(d, 0.0);
    s.stdev.assign(d, 1.0);
    if (n == 0) return s;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) s.mean[j] += x.row(i)[j];
    for (auto& m : s.mean) m /= static_cast<double>(n);
    for (std::size_t j = 0; j < d; ++j) {
        double var = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double dv = x.row(i)[j] - s.mean[j];
            var += dv * dv;
        }
        double sd = std::sqrt(var / static_cast<double>(n));
        s.stdev[j] = sd > 1e-12 * std::max(1.0, std::abs(s.mean[j])) ? sd : 1.0;
    }
    return s;
}

FeatureScaler FeatureScaler::identity(std::size_t dim)
{
    FeatureScaler s;
    s.mean.assign(dim, 0.0);
    s.stdev.assign(dim, 1.0);
    return s;
}

void FeatureScaler::apply(std::span<const double> raw, std::span<double> out) const
{
    if (raw.size() != mean.size() || out.size() != mean.size()) throw InputError("feature dimension mismatch");
    for (std::size_t j = 0; j < raw.size(); ++j) out[j] = (raw[j] - mean[j]) / stdev[j];
}

FeatureMatrix FeatureScaler::apply(const FeatureMatrix& x) const
{
    FeatureMatrix z(x.cols());
    std::vector<double> buf(x.cols());
    for (std::size_t i = 0; i < x.rows(); ++i) {
        apply(x.row(i), buf);
        z.add_row(buf);
    }
    return z;
}

double sigmoid(double s)
{
    if (s >= 0.0) return 1.0 / (1.0 + std::exp(-s));
    double e = std::exp(s);
    return e / (1.0 + e);
}

double sigmoid_open(double s)
{
    constexpr double lo = std::numeric_limits<double>::min();
    const double hi = std::nextafter(1.0, 0.0);
    return std::clamp(sigmoid(s), lo, hi);
}

namespace {

double dot(std::span<const double> a, std::span<const double> b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double softplus(double s) { return std::max(s, 0.0) + std::log1p(std::exp(-std::abs(s))); }

} // namespace

double bce_loss(const FeatureMatrix& z, std::span<const double> targets, std::span<const double> weights,
                double bias)
{
    const std::size_t n = z.rows();
    if (n == 0) return 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double s = dot(z.row(i), weights) + bias;
        // -[y log p + (1-y) log(1-p)] with p = sigmoid(s)
        total += softplus(s) - targets[i] * s;
    }
    return total / static_cast<double>(n);
}

void bce_gradient(const FeatureMatrix& z, std::span<const double> targets, std::span<const double> weights,
                  double bias, std::span<double> grad_weights, double& grad_bias)
{
    const std::size_t n = z.rows();
    std::fill(grad_weights.begin(), grad_weights.end(), 0.0);
    grad_bias = 0.0;
    if (n == 0) return;
    for (std::size_t i = 0; i < n; ++i) {
        auto row = z.row(i);
        double r = sigmoid(dot(row, weights) + bias) - targets[i];
        for (std::size_t j = 0; j < row.size(); ++j) grad_weights[j] += r * row[j];
        grad_bias += r;
    }
    for (auto& g : grad_weights) g /= static_cast<double>(n);
    grad_bias /= static_cast<double>(n);
}

double LogisticModel::logit(std::span<const double> raw_features) const
{
    if (raw_features.size() != weights.size()) throw InputError("feature dimension mismatch");
    double s = bias;
    for (std::size_t j = 0; j < weights.size(); ++j)
        s += weights[j] * (raw_features[j] - scaler.mean[j]) / scaler.stdev[j];
    return s;
}

LogisticModel LogisticModel::fit(const FeatureMatrix& x, std::span<const double> targets, const TrainOptions& options)
{
    if (x.rows() == 0) throw InputError("no training instances");
    if (targets.size() != x.rows()) throw InputError("target count does not match instance count");
    if (options.epochs < 0) throw InputError("epochs must be >= 0");
    if (!(options.learning_rate > 0.0)) throw InputError("learning rate must be > 0");

    LogisticModel m;
    m.scaler = FeatureScaler::fit(x);
    m.weights.assign(x.cols(), 0.0);
    m.epochs = options.epochs;
    m.learning_rate = options.learning_rate;

    const FeatureMatrix z = m.scaler.apply(x);
    std::vector<double> gw(x.cols());
    double gb = 0.0;
    m.loss_curve.reserve(static_cast<std::size_t>(options.epochs) + 1);
    m.loss_curve.push_back(bce_loss(z, targets, m.weights, m.bias));
    for (int e = 0; e < options.epochs; ++e) {
        bce_gradient(z, targets, m.weights, m.bias, gw, gb);
        for (std::size_t j = 0; j < gw.size(); ++j) m.weights[j] -= options.learning_rate * gw[j];
        m.bias -= options.learning_rate * gb;
        m.loss_curve.push_back(bce_loss(z, targets, m.weights, m.bias));
    }
    return m;
}

namespace {

void write_vector(std::ostream& out, std::string_view key, std::span<const double> v)
{
    out << key << ' ' << v.size();
    for (double x : v) out << ' ' << format_double(x);
    out << '\n';
}

std::vector<double> read_vector(std::istream& in, std::size_t& lineno, std::string_view key)
{
    std::string line;
    if (!std::getline(in, line)) throw ParseError(lineno + 1, "missing '" + std::string(key) + "'");
    ++lineno;
    auto fields = split_whitespace(line);
    if (fields.size() < 2 || fields[0] != key) throw ParseError(lineno, "expected '" + std::string(key) + "'");
    auto n = parse_int(fields[1]);
    if (!n || *n < 0 || static_cast<std::size_t>(*n) != fields.size() - 2)
        throw ParseError(lineno, "bad length for '" + std::string(key) + "'");
    std::vector<double> v;
    v.reserve(fields.size() - 2);
    for (std::size_t i = 2; i < fields.size(); ++i) {
        auto x = parse_double(fields[i]);
        if (!x) throw ParseError(lineno, "non-numeric value in '" + std::string(key) + "'");
        v.push_back(*x);
    }
    return v;
}

std::string read_scalar(std::istream& in, std::size_t& lineno, std::string_view key)
{
    std::string line;
    if (!std::getline(in, line)) throw ParseError(lineno + 1, "missing '" + std::string(key) + "'");
    ++lineno;
    auto fields = split_whitespace(line);
    if (fields.size() != 2 || fields[0] != key) throw ParseError(lineno, "expected '" + std::string(key) + " <value>'");
    return fields[1];
}

} // namespace

void LogisticModel::write(std::ostream& out) const
{
    write_vector(out, "weights", weights);
    out << "bias " << format_double(bias) << '\n';
    write_vector(out, "mean", scaler.mean);
    write_vector(out, "stdev", scaler.stdev);
    out << "epochs " << epochs << '\n';
    out << "learning_rate " << format_double(learning_rate) << '\n';
    write_vector(out, "loss", loss_curve);
}

LogisticModel LogisticModel::read(std::istream& in, std::size_t& lineno)
{
    LogisticModel m;
    m.weights = read_vector(in, lineno, "weights");
    auto bias = parse_double(read_scalar(in, lineno, "bias"));
    if (!bias) throw ParseError(lineno, "bad bias");
    m.bias = *bias;
    m.scaler.mean = read_vector(in, lineno, "mean");
    m.scaler.stdev = read_vector(in, lineno, "stdev");
    if (m.scaler.mean.size() != m.weights.size() || m.scaler.stdev.size() != m.weights.size())
        throw ParseError(lineno, "normalization stats do not match weight dimension");
    for (double sd : m.scaler.stdev)
        if (!(sd > 0.0)) throw ParseError(lineno, "stdev must be > 0");
    auto epochs = parse_int(read_scalar(in, lineno, "epochs"));
    if (!epochs || *epochs < 0) throw ParseError(lineno, "bad epochs");
    m.epochs = static_cast<int>(*epochs);
    auto lr = parse_double(read_scalar(in, lineno, "learning_rate"));
    if (!lr) throw ParseError(lineno, "bad learning_rate");
    m.learning_rate = *lr;
    m.loss_curve = read_vector(in, lineno, "loss");
    return m;
}

} // namespace hardrank
