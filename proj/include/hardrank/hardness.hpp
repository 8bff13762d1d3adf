#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <unordered_set>

#include "hardrank/types.hpp"

namespace hardrank {

/// Heuristics flagging obstinate queries. A query is hard when any rule fires.
struct HardnessRule {
    // Short queries: at most this many tokens.
    std::size_t max_token_count = 5;
    // Uncommon terms: an all-caps token of 2-5 letters.
    bool acronym_pattern = true;
    // Under-specified: fewer than this many non-stopword tokens.
    std::size_t min_context_terms = 2;
    // Uncommon terms: any token outside this lexicon (when supplied).
    std::optional<std::unordered_set<std::string>> lexicon;

    void validate() const;
};

bool has_acronym(const std::string& text);

Hardness classify_hardness(const Query& query, const HardnessRule& rule);

/// Reads one lowercase term per line.
std::unordered_set<std::string> load_lexicon(const std::string& path);

} // namespace hardrank
