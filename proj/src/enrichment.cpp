#include "hardrank/enrichment.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <istream>
#include <ostream>
#include <thread>

#include "hardrank/errors.hpp"
#include "hardrank/text.hpp"

namespace hardrank {

namespace {

constexpr std::string_view kHeader = "[hardrank-enrich-v1]\n";
constexpr std::string_view kInstruction =
    "Rewrite the search query below into a clear, self-contained query. "
    "Ground the rewrite only in the context passage: do not add facts that the passage does not state. "
    "Answer with the rewritten query on a single line.\n\n";
constexpr std::string_view kQueryMarker = "Query: ";
constexpr std::string_view kContextMarker = "\nContext: ";
constexpr std::string_view kAnswerMarker = "\nRewritten query:";

std::string one_line(std::string s)
{
    std::replace_if(s.begin(), s.end(), [](char c) { return c == '\t' || c == '\n' || c == '\r'; }, ' ');
    return s;
}

} // namespace

std::string build_prompt(const Query& query, const std::string& passage)
{
    if (trim(passage).empty()) throw InputError("build_prompt: passage must be non-empty");
    std::string out;
    out.reserve(kHeader.size() + kInstruction.size() + query.text.size() + passage.size() + 64);
    out.append(kHeader);
    out.append(kInstruction);
    out.append(kQueryMarker);
    out.append(one_line(query.text));
    out.append(kContextMarker);
    out.append(passage);
    out.append(kAnswerMarker);
    return out;
}

std::optional<PromptParts> parse_prompt(const std::string& prompt)
{
    if (!prompt.starts_with(kHeader)) return std::nullopt;
    auto q = prompt.find(kQueryMarker, kHeader.size() + kInstruction.size());
    if (q == std::string::npos) return std::nullopt;
    q += kQueryMarker.size();
    auto c = prompt.find(kContextMarker, q);
    if (c == std::string::npos) return std::nullopt;
    auto a = prompt.rfind(kAnswerMarker);
    if (a == std::string::npos || a < c) return std::nullopt;
    PromptParts parts;
    parts.query = prompt.substr(q, c - q);
    auto p = c + kContextMarker.size();
    parts.passage = prompt.substr(p, a - p);
    return parts;
}

std::string clean_completion(const std::string& completion, int max_tokens)
{
    auto text = trim(completion);
    auto nl = text.find_first_of("\r\n");
    if (nl != std::string_view::npos) text = text.substr(0, nl);
    auto words = split_whitespace(text);
    if (max_tokens >= 0 && words.size() > static_cast<std::size_t>(max_tokens)) words.resize(max_tokens);
    return join(words, " ");
}

namespace {

std::optional<std::string> best_judged_doc(const Qrels& qrels, const std::string& qid, const DocumentStore& corpus)
{
    const auto* judged = qrels.judgments(qid);
    if (!judged) return std::nullopt;
    std::optional<std::string> best;
    int best_grade = 0;
    for (const auto& [doc, grade] : *judged) {
        // map iteration is doc_id ascending, so strict > keeps the smallest id
        if (grade > best_grade && corpus.find(doc)) {
            best = doc;
            best_grade = grade;
        }
    }
    return best;
}

} // namespace

EnrichedQuery enrich(const Query& query, const InvertedIndex& index, const DocumentStore& corpus,
                     TextGenerator& generator, const PassageSelector& selector, const EnrichOptions& options)
{
    EnrichedQuery out;
    out.query_id = query.query_id;
    out.original_text = query.text;
    out.generator_id = generator.id();

    std::optional<std::string> context_doc;
    if (options.context == ContextSource::best_judged) {
        if (!options.qrels) throw InputError("best_judged context requires qrels");
        context_doc = best_judged_doc(*options.qrels, query.query_id, corpus);
    }
    if (!context_doc) {
        auto top = bm25_search(index, query, 1, options.bm25);
        if (!top.empty()) context_doc = top.front().doc_id;
    }
    if (!context_doc) {
        out.enriched_text = query.text;
        out.fallback = "no_retrieval";
        return out;
    }

    const Document& doc = corpus.at(*context_doc);
    auto passage = selector.select(doc, query);
    out.context_doc_id = doc.doc_id;
    out.context_passage = passage.text;

    std::string completion;
    try {
        completion = generator.complete(build_prompt(query, passage.text), options.max_tokens);
    } catch (const GeneratorError& e) {
        throw GeneratorError(query.query_id + ": " + e.what(), e.transient());
    }
    out.enriched_text = clean_completion(completion, options.max_tokens);
    if (out.enriched_text.empty()) {
        out.enriched_text = query.text;
        out.fallback = "empty_generation";
    }
    return out;
}

std::vector<EnrichOutcome> enrich_all(std::span<const Query> queries, const InvertedIndex& index,
                                      const DocumentStore& corpus, TextGenerator& generator,
                                      const PassageSelector& selector, const EnrichOptions& options,
                                      std::size_t parallelism)
{
    std::vector<EnrichOutcome> out(queries.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < queries.size(); i = next++) {
            try {
                out[i].enriched = enrich(queries[i], index, corpus, generator, selector, options);
            } catch (const std::exception& e) {
                out[i].error = e.what();
            }
        }
    };
    std::size_t n_workers = std::clamp<std::size_t>(parallelism, 1, std::max<std::size_t>(1, queries.size()));
    std::vector<std::jthread> workers;
    for (std::size_t w = 1; w < n_workers; ++w) workers.emplace_back(worker);
    worker();
    return out;
}

void write_enriched(std::ostream& out, std::span<const EnrichedQuery> rows)
{
    for (const auto& r : rows) {
        if (r.query_id.empty() || r.enriched_text.empty())
            throw InputError("enriched row with empty query id or text");
        out << r.query_id << '\t' << one_line(r.enriched_text) << '\t'
            << (r.context_doc_id.empty() ? "-" : r.context_doc_id) << '\t' << "generator=" << r.generator_id
            << ",template=" << r.template_version;
        if (r.is_fallback()) out << ",fallback=" << r.fallback;
        out << '\n';
    }
}

std::vector<EnrichedQuery> parse_enriched(std::istream& in)
{
    std::vector<EnrichedQuery> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        std::vector<std::string> fields;
        std::size_t start = 0;
        for (;;) {
            auto tab = line.find('\t', start);
            fields.push_back(line.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
            if (tab == std::string::npos) break;
            start = tab + 1;
        }
        if (fields.size() != 4) throw ParseError(lineno, "expected 4 tab-separated fields");
        EnrichedQuery r;
        r.query_id = fields[0];
        r.enriched_text = fields[1];
        if (r.query_id.empty() || trim(r.enriched_text).empty()) throw ParseError(lineno, "empty query id or text");
        if (fields[2] != "-") r.context_doc_id = fields[2];
        std::size_t pos = 0;
        const auto& flags = fields[3];
        while (pos <= flags.size()) {
            auto comma = flags.find(',', pos);
            auto item = flags.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
            auto eq = item.find('=');
            if (eq != std::string::npos) {
                auto key = item.substr(0, eq);
                auto value = item.substr(eq + 1);
                if (key == "generator") r.generator_id = value;
                else if (key == "template") r.template_version = value;
                else if (key == "fallback") r.fallback = value;
            }
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<EnrichedQuery> load_enriched(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path.string() + "'");
    try {
        return parse_enriched(in);
    } catch (const ParseError& e) {
        throw ParseError(e.line(), e.detail(), path.string());
    }
}

} // namespace hardrank
