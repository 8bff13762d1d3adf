#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace hardrank {

/// Row-major dense matrix of feature rows.
class FeatureMatrix {
public:
    explicit FeatureMatrix(std::size_t cols = 0) : cols_(cols) {}

    void add_row(std::span<const double> row);
    std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
    std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    std::size_t rows() const { return cols_ ? data_.size() / cols_ : 0; }
    std::size_t cols() const { return cols_; }

private:
    std::size_t cols_;
    std::vector<double> data_;
};

/// Z-score normalization frozen from training data; degenerate columns
/// (stdev ~ 0) get stdev 1.
struct FeatureScaler {
    std::vector<double> mean;
    std::vector<double> stdev;

    static FeatureScaler fit(const FeatureMatrix& x);
    static FeatureScaler identity(std::size_t dim);
    void apply(std::span<const double> raw, std::span<double> out) const;
    FeatureMatrix apply(const FeatureMatrix& x) const;

    friend bool operator==(const FeatureScaler&, const FeatureScaler&) = default;
};

double sigmoid(double s);
/// sigmoid clamped into the open interval (0,1).
double sigmoid_open(double s);

/// Mean binary cross-entropy of sigmoid(z.w + b) against targets in [0,1],
/// evaluated in the numerically stable softplus form.
double bce_loss(const FeatureMatrix& z, std::span<const double> targets, std::span<const double> weights,
                double bias);

/// Analytic gradient of bce_loss: mean of (p - y) * z and mean of (p - y).
void bce_gradient(const FeatureMatrix& z, std::span<const double> targets, std::span<const double> weights,
                  double bias, std::span<double> grad_weights, double& grad_bias);

struct TrainOptions {
    int epochs = 500;
    double learning_rate = 0.1;
    // Full-batch descent is deterministic; kept for stochastic variants.
    std::uint64_t seed = 0;
};

/// Linear scorer over normalized features with a sigmoid link.
struct LogisticModel {
    std::vector<double> weights;
    double bias = 0.0;
    FeatureScaler scaler;
    int epochs = 0;
    double learning_rate = 0.0;
    // loss_curve[0] is the loss at the zero initialization, loss_curve[e]
    // the loss after e epochs.
    std::vector<double> loss_curve;

    std::size_t dim() const { return weights.size(); }
    double logit(std::span<const double> raw_features) const;
    double predict(std::span<const double> raw_features) const { return sigmoid_open(logit(raw_features)); }

    /// Fits the scaler on `x`, starts from zero weights and runs full-batch
    /// gradient descent on the mean BCE. Targets may be soft labels in [0,1].
    static LogisticModel fit(const FeatureMatrix& x, std::span<const double> targets, const TrainOptions& options);

    void write(std::ostream& out) const;
    /// Reads the body written by write(); `lineno` tracks position for errors.
    static LogisticModel read(std::istream& in, std::size_t& lineno);

    friend bool operator==(const LogisticModel&, const LogisticModel&) = default;
};

} // namespace hardrank
