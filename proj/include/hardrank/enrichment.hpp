#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hardrank/generator.hpp"
#include "hardrank/index.hpp"
#include "hardrank/passage.hpp"
#include "hardrank/types.hpp"

namespace hardrank {

inline constexpr std::string_view kPromptTemplateVersion = "v1";

/// Instruction to rewrite `query` into a self-contained query using only
/// `passage`. Both are embedded verbatim. Throws InputError on an empty passage.
std::string build_prompt(const Query& query, const std::string& passage);

struct PromptParts {
    std::string query;
    std::string passage;
};
/// Inverse of build_prompt; nullopt if `prompt` does not follow the template.
std::optional<PromptParts> parse_prompt(const std::string& prompt);

struct EnrichedQuery {
    std::string query_id;
    std::string original_text;
    std::string enriched_text;
    // Empty on fallback.
    std::string context_doc_id;
    std::string context_passage;
    std::string generator_id;
    std::string template_version{kPromptTemplateVersion};
    // Why the original text was kept: "no_retrieval" or "empty_generation".
    std::string fallback;

    bool is_fallback() const { return !fallback.empty(); }
};

enum class ContextSource {
    // d+ is the rank-1 BM25 document.
    bm25_top1,
    // d+ is the highest-graded judged document (doc_id ascending on ties),
    // falling back to BM25 when the query has no positive judgment.
    best_judged,
};

struct EnrichOptions {
    Bm25Params bm25;
    ContextSource context = ContextSource::bm25_top1;
    const Qrels* qrels = nullptr;
    int max_tokens = 64;
};

/// Collapses a completion to its first line, capped at `max_tokens`
/// whitespace tokens.
std::string clean_completion(const std::string& completion, int max_tokens);

/// Context-aware enrichment of one query. Throws GeneratorError (prefixed
/// with the query id) when the generator fails.
EnrichedQuery enrich(const Query& query, const InvertedIndex& index, const DocumentStore& corpus,
                     TextGenerator& generator, const PassageSelector& selector, const EnrichOptions& options);

struct EnrichOutcome {
    std::optional<EnrichedQuery> enriched;
    std::string error;
};

/// Enriches a batch on up to `parallelism` worker threads. Failures are
/// collected per query; output order follows `queries`.
std::vector<EnrichOutcome> enrich_all(std::span<const Query> queries, const InvertedIndex& index,
                                      const DocumentStore& corpus, TextGenerator& generator,
                                      const PassageSelector& selector, const EnrichOptions& options,
                                      std::size_t parallelism);

/// `<qid>\t<enriched_text>\t<context_doc_id>\t<flags>`; flags are
/// `generator=<id>,template=<v>[,fallback=<reason>]` and a fallback row
/// carries "-" as context_doc_id.
void write_enriched(std::ostream& out, std::span<const EnrichedQuery> rows);
std::vector<EnrichedQuery> parse_enriched(std::istream& in);
std::vector<EnrichedQuery> load_enriched(const std::filesystem::path& path);

} // namespace hardrank
