#include "hardrank/passage.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "hardrank/errors.hpp"
#include "hardrank/text.hpp"

namespace hardrank {

namespace {

struct WindowScore {
    std::size_t distinct = 0;
    double tf_weight = 0.0;
};

WindowScore score_tokens(const std::vector<TokenSpan>& tokens, std::size_t first, std::size_t last,
                         const std::unordered_set<std::string>& query_terms, double k1)
{
    std::unordered_map<std::string_view, int> tf;
    for (std::size_t i = first; i < last; ++i)
        if (query_terms.contains(tokens[i].term)) ++tf[tokens[i].term];
    WindowScore s;
    s.distinct = tf.size();
    for (const auto& [term, count] : tf) s.tf_weight += count * (k1 + 1.0) / (count + k1);
    return s;
}

bool better(const WindowScore& a, const WindowScore& b)
{
    if (a.distinct != b.distinct) return a.distinct > b.distinct;
    return a.tf_weight > b.tf_weight;
}

} // namespace

LexicalPassageSelector::LexicalPassageSelector(std::size_t window, Bm25Params params)
    : window_(window), params_(params)
{
    if (window_ == 0) throw InputError("passage window must be >= 1");
    params_.validate();
}

std::string LexicalPassageSelector::id() const { return "lexical-w" + std::to_string(window_); }

Passage LexicalPassageSelector::select(const Document& doc, const Query& query) const
{
    if (trim(doc.text).empty()) throw InputError("select_passage: document '" + doc.doc_id + "' has empty text");
    auto qterms = distinct_terms(query.text);
    std::unordered_set<std::string> query_terms(qterms.begin(), qterms.end());

    if (!doc.passages.empty()) {
        std::size_t best = 0;
        WindowScore best_score{};
        for (std::size_t i = 0; i < doc.passages.size(); ++i) {
            auto toks = tokenize_spans(doc.passages[i]);
            auto s = score_tokens(toks, 0, toks.size(), query_terms, params_.k1);
            if (i == 0 || better(s, best_score)) {
                best = i;
                best_score = s;
            }
        }
        Passage p;
        p.text = doc.passages[best];
        p.score = static_cast<double>(best_score.distinct);
        auto at = doc.text.find(p.text);
        p.begin = at == std::string::npos ? 0 : at;
        p.end = at == std::string::npos ? 0 : at + p.text.size();
        return p;
    }

    auto tokens = tokenize_spans(doc.text);
    if (tokens.empty()) {
        Passage p;
        p.text = doc.text;
        p.end = doc.text.size();
        return p;
    }

    const std::size_t stride = std::max<std::size_t>(1, window_ / 2);
    std::size_t best_first = 0;
    std::size_t best_last = std::min(window_, tokens.size());
    WindowScore best_score = score_tokens(tokens, best_first, best_last, query_terms, params_.k1);
    for (std::size_t first = stride; first < tokens.size(); first += stride) {
        // the previous window already reached the end of the document
        if (first - stride + window_ >= tokens.size()) break;
        std::size_t last = std::min(first + window_, tokens.size());
        auto s = score_tokens(tokens, first, last, query_terms, params_.k1);
        if (better(s, best_score)) {
            best_first = first;
            best_last = last;
            best_score = s;
        }
    }

    Passage p;
    p.begin = tokens[best_first].begin;
    p.end = tokens[best_last - 1].end;
    p.text = doc.text.substr(p.begin, p.end - p.begin);
    p.score = static_cast<double>(best_score.distinct);
    return p;
}

} // namespace hardrank
