#include "hardrank/hardness.hpp"

#include <algorithm>
#include <fstream>

#include "hardrank/errors.hpp"
#include "hardrank/text.hpp"

namespace hardrank {

void HardnessRule::validate() const
{
    if (max_token_count < 1) throw InputError("hardness.max_token_count must be >= 1");
}

bool has_acronym(const std::string& text)
{
    for (const auto& raw : split_whitespace(text)) {
        // strip surrounding punctuation: "(NASA)," -> "NASA"
        auto first = raw.find_first_not_of("\"'()[]{},.;:!?");
        auto last = raw.find_last_not_of("\"'()[]{},.;:!?");
        if (first == std::string::npos) continue;
        std::string_view tok(raw.data() + first, last - first + 1);
        if (tok.size() < 2 || tok.size() > 5) continue;
        if (std::all_of(tok.begin(), tok.end(), [](char c) { return c >= 'A' && c <= 'Z'; })) return true;
    }
    return false;
}

Hardness classify_hardness(const Query& query, const HardnessRule& rule)
{
    auto tokens = tokenize(query.text);
    if (tokens.size() <= rule.max_token_count) return Hardness::hard;
    if (rule.acronym_pattern && has_acronym(query.text)) return Hardness::hard;
    if (rule.lexicon) {
        for (const auto& t : tokens)
            if (!rule.lexicon->contains(t)) return Hardness::hard;
    }
    auto content = std::count_if(tokens.begin(), tokens.end(), [](const std::string& t) { return !is_stopword(t); });
    if (static_cast<std::size_t>(content) < rule.min_context_terms) return Hardness::hard;
    return Hardness::easy;
}

std::unordered_set<std::string> load_lexicon(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw InputError("cannot open lexicon '" + path + "'");
    std::unordered_set<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        for (auto& t : tokenize(line)) out.insert(std::move(t));
    }
    return out;
}

} // namespace hardrank
