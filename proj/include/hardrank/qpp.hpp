#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "hardrank/index.hpp"
#include "hardrank/logistic.hpp"
#include "hardrank/types.hpp"

namespace hardrank {

/// Post-retrieval predictors over the top-k first-stage list:
/// mean score, population stdev, max score, gap s_1 - s_k, query token
/// count, mean idf of the distinct query terms.
inline constexpr std::size_t kQppFeatureDim = 6;
using QppFeatures = std::array<double, kQppFeatureDim>;

/// Throws InputError on an empty `topk`.
QppFeatures qpp_features(const Query& query, const RankedList& topk, const InvertedIndex& index);

/// How the sigmoid output maps to hardness. The estimator is trained to
/// predict nDCG@10 (high = easy); `inverted` reports psi = 1 - prediction so
/// that higher psi means harder.
enum class QppOrientation { inverted, direct };

std::string to_string(QppOrientation o);
QppOrientation parse_orientation(const std::string& s);

struct QppModel {
    std::string name = "qpp";
    std::size_t k = 10;
    QppOrientation orientation = QppOrientation::inverted;
    LogisticModel core;
    // Median oriented psi over the training queries.
    double train_median_psi = 0.5;

    static QppModel untrained(std::size_t k = 10, QppOrientation orientation = QppOrientation::inverted);

    /// Raw sigmoid output: the predicted nDCG@10.
    double predict_performance(const QppFeatures& features) const { return core.predict(features); }

    void save(std::ostream& out) const;
    static QppModel load(std::istream& in);
    void save(const std::filesystem::path& path) const;
    static QppModel load(const std::filesystem::path& path);

    friend bool operator==(const QppModel&, const QppModel&) = default;
};

struct QppTrainingExample {
    Query query;
    // First-stage list; only the top k entries are used.
    RankedList retrieved;
    // nDCG@10 of the first-stage list, in [0,1].
    double label = 0.0;
};

/// Soft-target BCE, L = -(1/N) sum[M log psi + (1 - M) log(1 - psi)], minimized
/// by full-batch descent. Throws InputError for N < 2, labels outside [0,1]
/// or an empty retrieved list.
QppModel train_qpp(std::span<const QppTrainingExample> examples, const TrainOptions& options, std::size_t k,
                   QppOrientation orientation, const InvertedIndex& index);

struct QppEstimate {
    std::string query_id;
    double psi = 0.0;
    std::string provider_id;
};

QppEstimate estimate(const QppModel& model, const Query& query, const RankedList& retrieved,
                     const InvertedIndex& index);

/// Source of per-query hardness estimates.
class QppProvider {
public:
    virtual ~QppProvider() = default;
    virtual QppEstimate estimate(const Query& query, const RankedList& retrieved) const = 0;
    virtual std::string id() const = 0;
};

class ModelQppProvider final : public QppProvider {
public:
    ModelQppProvider(QppModel model, const InvertedIndex& index);
    QppEstimate estimate(const Query& query, const RankedList& retrieved) const override;
    std::string id() const override;
    const QppModel& model() const { return model_; }

private:
    QppModel model_;
    const InvertedIndex& index_;
};

/// Precomputed scores per query id.
class FileQppProvider final : public QppProvider {
public:
    /// Throws InputError on any score outside [0,1].
    explicit FileQppProvider(std::map<std::string, double> scores, std::string name = "file");
    static FileQppProvider from_file(const std::filesystem::path& path);

    /// Throws InputError for an unknown query id.
    QppEstimate estimate(const Query& query, const RankedList& retrieved) const override;
    std::string id() const override { return name_; }
    const std::map<std::string, double>& scores() const { return scores_; }

private:
    std::map<std::string, double> scores_;
    std::string name_;
};

/// psi for each query; parallel across queries.
std::map<std::string, double> estimate_all(const QppProvider& provider, std::span<const Query> queries,
                                           const RunList& first_stage);
std::map<std::string, double> estimate_all_serial(const QppProvider& provider, std::span<const Query> queries,
                                                  const RunList& first_stage);

double median(std::vector<double> values);

} // namespace hardrank
