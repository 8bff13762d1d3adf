#include "hardrank/features.hpp"

#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "hardrank/errors.hpp"
#include "hardrank/text.hpp"

namespace hardrank {

FeatureVector extract_features(std::string_view query_text, const Document& doc, const InvertedIndex& index,
                               const Bm25Params& params)
{
    auto internal = index.internal_id(doc.doc_id);
    if (!internal) throw InputError("doc_id '" + doc.doc_id + "' is not in the index");

    auto query_tokens = tokenize(query_text);
    auto doc_tokens = tokenize(doc.text);
    auto terms = distinct_terms(query_text);

    std::unordered_map<std::string_view, double> qtf;
    std::unordered_map<std::string_view, double> dtf;
    for (const auto& t : query_tokens) qtf[t] += 1.0;
    for (const auto& t : doc_tokens) dtf[t] += 1.0;

    std::unordered_set<std::string_view> lead;
    for (std::size_t i = 0; i < doc_tokens.size() && i < kLeadTokens; ++i) lead.insert(doc_tokens[i]);

    double present = 0.0;
    double in_lead = 0.0;
    for (const auto& t : terms) {
        if (dtf.contains(t)) present += 1.0;
        if (lead.contains(t)) in_lead += 1.0;
    }
    const double nterms = static_cast<double>(terms.size());

    double dotp = 0.0;
    double qnorm = 0.0;
    double dnorm = 0.0;
    for (const auto& [t, c] : qtf) {
        qnorm += c * c;
        auto it = dtf.find(t);
        if (it != dtf.end()) dotp += c * it->second;
    }
    for (const auto& [t, c] : dtf) dnorm += c * c;

    FeatureVector f{};
    f[0] = bm25_score(index, terms, *internal, params);
    f[1] = nterms > 0 ? present / nterms : 0.0;
    f[2] = (qnorm > 0 && dnorm > 0) ? dotp / (std::sqrt(qnorm) * std::sqrt(dnorm)) : 0.0;
    f[3] = static_cast<double>(query_tokens.size());
    f[4] = std::log1p(static_cast<double>(doc_tokens.size()));
    f[5] = nterms > 0 ? in_lead / nterms : 0.0;
    return f;
}

} // namespace hardrank
