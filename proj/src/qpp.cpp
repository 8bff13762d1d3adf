#include "hardrank/qpp.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <istream>
#include <mutex>
#include <ostream>

#include "hardrank/errors.hpp"
#include "hardrank/io.hpp"
#include "hardrank/text.hpp"

namespace hardrank {

QppFeatures qpp_features(const Query& query, const RankedList& topk, const InvertedIndex& index)
{
    if (topk.empty()) throw InputError("qpp_features: empty top-k list for query " + query.query_id);
    const double n = static_cast<double>(topk.size());
    double sum = 0.0;
    double max = topk.front().score;
    for (const auto& r : topk) {
        sum += r.score;
        max = std::max(max, r.score);
    }
    const double mean = sum / n;
    double var = 0.0;
    for (const auto& r : topk) var += (r.score - mean) * (r.score - mean);

    auto terms = distinct_terms(query.text);
    double idf_sum = 0.0;
    for (const auto& t : terms) idf_sum += index.idf(t);

    QppFeatures f{};
    f[0] = mean;
    f[1] = std::sqrt(var / n);
    f[2] = max;
    f[3] = topk.front().score - topk.back().score;
    f[4] = static_cast<double>(tokenize(query.text).size());
    f[5] = terms.empty() ? 0.0 : idf_sum / static_cast<double>(terms.size());
    return f;
}

std::string to_string(QppOrientation o) { return o == QppOrientation::inverted ? "inverted" : "direct"; }

QppOrientation parse_orientation(const std::string& s)
{
    if (s == "inverted") return QppOrientation::inverted;
    if (s == "direct") return QppOrientation::direct;
    throw InputError("qpp orientation must be 'inverted' or 'direct', got '" + s + "'");
}

QppModel QppModel::untrained(std::size_t k, QppOrientation orientation)
{
    QppModel m;
    m.k = k;
    m.orientation = orientation;
    m.core.weights.assign(kQppFeatureDim, 0.0);
    m.core.scaler = FeatureScaler::identity(kQppFeatureDim);
    return m;
}

namespace {

double orient(QppOrientation o, double p) { return o == QppOrientation::inverted ? 1.0 - p : p; }

RankedList prefix(const RankedList& list, std::size_t k)
{
    return RankedList(list.begin(), list.begin() + static_cast<std::ptrdiff_t>(std::min(k, list.size())));
}

} // namespace

void QppModel::save(std::ostream& out) const
{
    out << "hardrank-model v1\n";
    out << "kind qpp\n";
    out << "name " << (name.empty() ? "qpp" : name) << '\n';
    out << "k " << k << '\n';
    out << "orientation " << to_string(orientation) << '\n';
    out << "train_median_psi " << format_double(train_median_psi) << '\n';
    core.write(out);
}

QppModel QppModel::load(std::istream& in)
{
    std::size_t lineno = 0;
    std::string line;
    auto expect = [&](std::string_view prefix) {
        if (!std::getline(in, line)) throw ParseError(lineno + 1, "unexpected end of model file");
        ++lineno;
        if (!line.starts_with(prefix)) throw ParseError(lineno, "expected '" + std::string(prefix) + "'");
        return line.substr(prefix.size());
    };
    if (expect("hardrank-model v1") != "") throw ParseError(lineno, "unsupported model header");
    if (expect("kind ") != "qpp") throw ParseError(lineno, "not a qpp model");
    QppModel m;
    m.name = expect("name ");
    auto k = parse_int(expect("k "));
    if (!k || *k < 1) throw ParseError(lineno, "k must be >= 1");
    m.k = static_cast<std::size_t>(*k);
    try {
        m.orientation = parse_orientation(expect("orientation "));
    } catch (const InputError& e) {
        throw ParseError(lineno, e.what());
    }
    auto median_psi = parse_double(expect("train_median_psi "));
    if (!median_psi || *median_psi < 0.0 || *median_psi > 1.0) throw ParseError(lineno, "bad train_median_psi");
    m.train_median_psi = *median_psi;
    m.core = LogisticModel::read(in, lineno);
    if (m.core.dim() != kQppFeatureDim) throw ParseError(lineno, "qpp model must have 6 weights");
    return m;
}

void QppModel::save(const std::filesystem::path& path) const
{
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw RuntimeFailure("cannot write model '" + path.string() + "'");
    save(out);
}

QppModel QppModel::load(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw InputError("cannot open model '" + path.string() + "'");
    try {
        return load(in);
    } catch (const ParseError& e) {
        throw ParseError(e.line(), e.detail(), path.string());
    }
}

QppModel train_qpp(std::span<const QppTrainingExample> examples, const TrainOptions& options, std::size_t k,
                   QppOrientation orientation, const InvertedIndex& index)
{
    if (k < 1) throw InputError("qpp k must be >= 1");
    if (examples.size() < 2) throw InputError("qpp training needs at least 2 queries");
    FeatureMatrix x(kQppFeatureDim);
    std::vector<double> targets;
    for (const auto& ex : examples) {
        if (!(ex.label >= 0.0 && ex.label <= 1.0))
            throw InputError("qpp label for " + ex.query.query_id + " outside [0,1]");
        x.add_row(qpp_features(ex.query, prefix(ex.retrieved, k), index));
        targets.push_back(ex.label);
    }
    QppModel m;
    m.k = k;
    m.orientation = orientation;
    m.core = LogisticModel::fit(x, targets, options);

    std::vector<double> psi;
    psi.reserve(x.rows());
    for (std::size_t i = 0; i < x.rows(); ++i) psi.push_back(orient(orientation, m.core.predict(x.row(i))));
    m.train_median_psi = median(std::move(psi));
    return m;
}

QppEstimate estimate(const QppModel& model, const Query& query, const RankedList& retrieved, const InvertedIndex& index)
{
    auto f = qpp_features(query, prefix(retrieved, model.k), index);
    return QppEstimate{query.query_id, orient(model.orientation, model.predict_performance(f)),
                       model.name + ":" + to_string(model.orientation)};
}

ModelQppProvider::ModelQppProvider(QppModel model, const InvertedIndex& index) : model_(std::move(model)), index_(index)
{
}

QppEstimate ModelQppProvider::estimate(const Query& query, const RankedList& retrieved) const
{
    return hardrank::estimate(model_, query, retrieved, index_);
}

std::string ModelQppProvider::id() const { return model_.name + ":" + to_string(model_.orientation); }

FileQppProvider::FileQppProvider(std::map<std::string, double> scores, std::string name)
    : scores_(std::move(scores)), name_(std::move(name))
{
    for (const auto& [qid, s] : scores_)
        if (!(s >= 0.0 && s <= 1.0)) throw InputError("qpp score for '" + qid + "' outside [0,1]");
}

FileQppProvider FileQppProvider::from_file(const std::filesystem::path& path)
{
    return FileQppProvider(io::load_qpp_scores(path), "file:" + path.filename().string());
}

QppEstimate FileQppProvider::estimate(const Query& query, const RankedList& /*retrieved*/) const
{
    auto it = scores_.find(query.query_id);
    if (it == scores_.end()) throw InputError("no qpp score for query '" + query.query_id + "' in " + name_);
    return QppEstimate{query.query_id, it->second, name_};
}

std::map<std::string, double> estimate_all(const QppProvider& provider, std::span<const Query> queries,
                                           const RunList& first_stage)
{
    static const RankedList kEmpty;
    std::vector<double> psi(queries.size());
    std::exception_ptr error;
    std::mutex error_mutex;
    const auto n = static_cast<std::ptrdiff_t>(queries.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        try {
            const auto* list = first_stage.find(queries[i].query_id);
            psi[i] = provider.estimate(queries[i], list ? *list : kEmpty).psi;
        } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);
    std::map<std::string, double> out;
    for (std::size_t i = 0; i < queries.size(); ++i) out[queries[i].query_id] = psi[i];
    return out;
}

std::map<std::string, double> estimate_all_serial(const QppProvider& provider, std::span<const Query> queries,
                                                  const RunList& first_stage)
{
    static const RankedList kEmpty;
    std::map<std::string, double> out;
    for (const auto& q : queries) {
        const auto* list = first_stage.find(q.query_id);
        out[q.query_id] = provider.estimate(q, list ? *list : kEmpty).psi;
    }
    return out;
}

double median(std::vector<double> values)
{
    if (values.empty()) throw InputError("median of an empty set");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

} // namespace hardrank
