#include "hardrank/index.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include "hardrank/errors.hpp"
#include "hardrank/text.hpp"

namespace hardrank {

void Bm25Params::validate() const
{
    if (!(k1 > 0.0) || !std::isfinite(k1)) throw InputError("bm25.k1 must be > 0");
    if (!(b >= 0.0 && b <= 1.0)) throw InputError("bm25.b must be in [0,1]");
}

InvertedIndex InvertedIndex::build(std::span<const Document> corpus)
{
    if (corpus.empty()) throw InputError("cannot index an empty corpus");
    InvertedIndex index;
    index.doc_ids_.reserve(corpus.size());
    index.lengths_.reserve(corpus.size());
    for (const auto& doc : corpus) {
        if (doc.doc_id.empty()) throw InputError("document with empty doc_id");
        auto internal = static_cast<std::uint32_t>(index.doc_ids_.size());
        if (!index.id_lookup_.emplace(doc.doc_id, internal).second)
            throw DuplicateError("duplicate doc_id '" + doc.doc_id + "'");
        index.doc_ids_.push_back(doc.doc_id);

        auto tokens = tokenize(doc.text);
        index.lengths_.push_back(static_cast<std::uint32_t>(tokens.size()));
        std::unordered_map<std::string, std::uint32_t> tf;
        for (auto& t : tokens) ++tf[t];
        for (auto& [term, count] : tf) index.postings_[term].push_back(Posting{internal, count});
    }
    index.finish();
    return index;
}

void InvertedIndex::finish()
{
    double total = 0.0;
    for (auto len : lengths_) total += len;
    avg_length_ = lengths_.empty() ? 0.0 : total / static_cast<double>(lengths_.size());
    for (auto& [term, list] : postings_)
        std::sort(list.begin(), list.end(), [](const Posting& a, const Posting& b) { return a.doc < b.doc; });
    if (id_lookup_.empty())
        for (std::uint32_t i = 0; i < doc_ids_.size(); ++i) id_lookup_.emplace(doc_ids_[i], i);
}

std::optional<std::uint32_t> InvertedIndex::internal_id(const std::string& doc_id) const
{
    auto it = id_lookup_.find(doc_id);
    if (it == id_lookup_.end()) return std::nullopt;
    return it->second;
}

const std::vector<Posting>* InvertedIndex::postings(const std::string& term) const
{
    auto it = postings_.find(term);
    return it == postings_.end() ? nullptr : &it->second;
}

std::size_t InvertedIndex::doc_freq(const std::string& term) const
{
    const auto* p = postings(term);
    return p ? p->size() : 0;
}

std::uint32_t InvertedIndex::term_frequency(const std::string& term, std::uint32_t doc) const
{
    const auto* p = postings(term);
    if (!p) return 0;
    auto it = std::lower_bound(p->begin(), p->end(), doc, [](const Posting& x, std::uint32_t d) { return x.doc < d; });
    return (it != p->end() && it->doc == doc) ? it->tf : 0;
}

double InvertedIndex::idf(const std::string& term) const
{
    auto n = static_cast<double>(num_docs());
    auto df = static_cast<double>(doc_freq(term));
    return std::max(0.0, std::log((n - df + 0.5) / (df + 0.5)));
}

void InvertedIndex::save(std::ostream& out) const
{
    out << kFormatHeader << '\n';
    out << "docs " << doc_ids_.size() << '\n';
    for (std::size_t i = 0; i < doc_ids_.size(); ++i) out << doc_ids_[i] << '\t' << lengths_[i] << '\n';
    std::vector<const std::string*> terms;
    terms.reserve(postings_.size());
    for (const auto& [term, list] : postings_) terms.push_back(&term);
    std::sort(terms.begin(), terms.end(), [](auto* a, auto* b) { return *a < *b; });
    out << "terms " << terms.size() << '\n';
    for (const auto* term : terms) {
        const auto& list = postings_.at(*term);
        out << *term << '\t' << list.size() << '\t';
        for (std::size_t i = 0; i < list.size(); ++i) {
            if (i) out << ' ';
            out << list[i].doc << ':' << list[i].tf;
        }
        out << '\n';
    }
}

InvertedIndex InvertedIndex::load(std::istream& in)
{
    std::string line;
    std::size_t lineno = 0;
    auto next = [&]() -> std::string& {
        if (!std::getline(in, line)) throw ParseError(lineno + 1, "unexpected end of index file");
        ++lineno;
        return line;
    };
    auto count_after = [&](std::string_view prefix) {
        const auto& l = next();
        if (!l.starts_with(prefix)) throw ParseError(lineno, "expected '" + std::string(prefix) + "'");
        auto n = parse_int(std::string_view(l).substr(prefix.size()));
        if (!n || *n < 0) throw ParseError(lineno, "bad count");
        return static_cast<std::size_t>(*n);
    };

    if (next() != kFormatHeader) throw ParseError(lineno, "not a hardrank index (or unsupported version)");
    InvertedIndex index;
    auto ndocs = count_after("docs ");
    if (ndocs == 0) throw ParseError(lineno, "index has no documents");
    for (std::size_t i = 0; i < ndocs; ++i) {
        const auto& l = next();
        auto tab = l.find('\t');
        if (tab == std::string::npos) throw ParseError(lineno, "expected <doc_id>\\t<length>");
        auto len = parse_int(std::string_view(l).substr(tab + 1));
        if (!len || *len < 0) throw ParseError(lineno, "bad document length");
        auto id = l.substr(0, tab);
        if (!index.id_lookup_.emplace(id, static_cast<std::uint32_t>(i)).second)
            throw DuplicateError("duplicate doc_id '" + id + "' in index");
        index.doc_ids_.push_back(id);
        index.lengths_.push_back(static_cast<std::uint32_t>(*len));
    }
    auto nterms = count_after("terms ");
    for (std::size_t i = 0; i < nterms; ++i) {
        const auto& l = next();
        auto fields = split_whitespace(l);
        if (fields.size() < 3) throw ParseError(lineno, "expected <term>\\t<df>\\t<postings>");
        auto df = parse_int(fields[1]);
        if (!df || static_cast<std::size_t>(*df) != fields.size() - 2) throw ParseError(lineno, "posting count mismatch");
        std::vector<Posting> list;
        for (std::size_t f = 2; f < fields.size(); ++f) {
            auto colon = fields[f].find(':');
            if (colon == std::string::npos) throw ParseError(lineno, "bad posting '" + fields[f] + "'");
            auto doc = parse_int(std::string_view(fields[f]).substr(0, colon));
            auto tf = parse_int(std::string_view(fields[f]).substr(colon + 1));
            if (!doc || !tf || *doc < 0 || static_cast<std::size_t>(*doc) >= ndocs || *tf < 1)
                throw ParseError(lineno, "bad posting '" + fields[f] + "'");
            list.push_back(Posting{static_cast<std::uint32_t>(*doc), static_cast<std::uint32_t>(*tf)});
        }
        index.postings_.emplace(fields[0], std::move(list));
    }
    index.finish();
    return index;
}

void InvertedIndex::save(const std::filesystem::path& path) const
{
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw RuntimeFailure("cannot write index '" + path.string() + "'");
    save(out);
}

InvertedIndex InvertedIndex::load(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw InputError("cannot open index '" + path.string() + "'");
    try {
        return load(in);
    } catch (const ParseError& e) {
        throw ParseError(e.line(), e.detail(), path.string());
    }
}

std::vector<std::string> distinct_terms(std::string_view text)
{
    std::vector<std::string> out;
    std::unordered_set<std::string> seen;
    for (auto& t : tokenize(text))
        if (seen.insert(t).second) out.push_back(std::move(t));
    return out;
}

namespace {

double term_weight(double idf, double tf, double len, double avg_len, const Bm25Params& p)
{
    double norm = avg_len > 0.0 ? len / avg_len : 0.0;
    return idf * tf * (p.k1 + 1.0) / (tf + p.k1 * (1.0 - p.b + p.b * norm));
}

} // namespace

double bm25_score(const InvertedIndex& index, std::span<const std::string> terms, std::uint32_t doc,
                  const Bm25Params& params)
{
    double score = 0.0;
    for (const auto& term : terms) {
        auto tf = index.term_frequency(term, doc);
        if (tf == 0) continue;
        score += term_weight(index.idf(term), tf, index.doc_length(doc), index.avg_doc_length(), params);
    }
    return score;
}

RankedList bm25_search(const InvertedIndex& index, const Query& query, std::size_t k, const Bm25Params& params)
{
    if (k == 0) throw InputError("bm25_search: k must be >= 1");
    auto terms = distinct_terms(query.text);
    std::unordered_map<std::uint32_t, double> acc;
    for (const auto& term : terms) {
        const auto* list = index.postings(term);
        if (!list) continue;
        double idf = index.idf(term);
        if (idf <= 0.0) continue;
        for (const auto& p : *list)
            acc[p.doc] += term_weight(idf, p.tf, index.doc_length(p.doc), index.avg_doc_length(), params);
    }
    RankedList out;
    out.reserve(acc.size());
    for (const auto& [doc, score] : acc)
        if (score > 0.0) out.push_back(RunRecord{index.doc_id(doc), score, 0});
    auto cmp = [](const RunRecord& a, const RunRecord& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.doc_id < b.doc_id;
    };
    if (out.size() > k) {
        std::partial_sort(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(k), out.end(), cmp);
        out.resize(k);
    } else {
        std::sort(out.begin(), out.end(), cmp);
    }
    for (std::size_t i = 0; i < out.size(); ++i) out[i].rank = static_cast<int>(i + 1);
    return out;
}

RunList search_all(const InvertedIndex& index, std::span<const Query> queries, std::size_t k,
                   const Bm25Params& params, const std::string& tag)
{
    std::vector<RankedList> lists(queries.size());
    const auto n = static_cast<std::ptrdiff_t>(queries.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n; ++i) lists[i] = bm25_search(index, queries[i], k, params);

    RunList run;
    run.tag = tag;
    for (std::size_t i = 0; i < queries.size(); ++i) run.queries[queries[i].query_id] = std::move(lists[i]);
    return run;
}

RunList search_all_serial(const InvertedIndex& index, std::span<const Query> queries, std::size_t k,
                          const Bm25Params& params, const std::string& tag)
{
    RunList run;
    run.tag = tag;
    for (const auto& q : queries) run.queries[q.query_id] = bm25_search(index, q, k, params);
    return run;
}

} // namespace hardrank
