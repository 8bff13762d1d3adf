#include "hardrank/text.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <unordered_set>

namespace hardrank {

namespace {

bool is_alnum(char c)
{
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

char to_lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

// clang-format off
constexpr std::array<std::string_view, 100> kStopwords = {
    "a", "about", "above", "after", "again", "against", "all", "am", "an", "and",
    "any", "are", "as", "at", "be", "because", "been", "before", "being", "below",
    "between", "both", "but", "by", "can", "could", "did", "do", "does", "doing",
    "down", "during", "each", "few", "for", "from", "further", "had", "has", "have",
    "having", "he", "her", "here", "hers", "him", "his", "how", "i", "if",
    "in", "into", "is", "it", "its", "just", "me", "more", "most", "my",
    "no", "nor", "not", "now", "of", "off", "on", "once", "only", "or",
    "other", "our", "out", "over", "own", "same", "she", "should", "so", "some",
    "such", "than", "that", "the", "their", "them", "then", "there", "these", "they",
    "this", "those", "through", "to", "what", "when", "where", "which", "who", "why",
};
// clang-format on

const std::unordered_set<std::string_view>& stopword_set()
{
    static const std::unordered_set<std::string_view> set(kStopwords.begin(), kStopwords.end());
    return set;
}

} // namespace

std::vector<TokenSpan> tokenize_spans(std::string_view text)
{
    std::vector<TokenSpan> out;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && !is_alnum(text[i])) ++i;
        std::size_t start = i;
        while (i < text.size() && is_alnum(text[i])) ++i;
        if (i > start) {
            TokenSpan tok;
            tok.begin = start;
            tok.end = i;
            tok.term.reserve(i - start);
            for (std::size_t j = start; j < i; ++j) tok.term.push_back(to_lower(text[j]));
            out.push_back(std::move(tok));
        }
    }
    return out;
}

std::vector<std::string> tokenize(std::string_view text)
{
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && !is_alnum(text[i])) ++i;
        std::size_t start = i;
        while (i < text.size() && is_alnum(text[i])) ++i;
        if (i > start) {
            std::string term;
            term.reserve(i - start);
            for (std::size_t j = start; j < i; ++j) term.push_back(to_lower(text[j]));
            out.push_back(std::move(term));
        }
    }
    return out;
}

std::vector<std::string> split_whitespace(std::string_view text)
{
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && is_space(text[i])) ++i;
        std::size_t start = i;
        while (i < text.size() && !is_space(text[i])) ++i;
        if (i > start) out.emplace_back(text.substr(start, i - start));
    }
    return out;
}

std::string_view trim(std::string_view s)
{
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep)
{
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out.append(sep);
        out.append(parts[i]);
    }
    return out;
}

bool is_stopword(std::string_view lowercase_term) { return stopword_set().contains(lowercase_term); }

std::size_t stopword_count() { return stopword_set().size(); }

std::string format_double(double value)
{
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), ptr);
}

std::optional<double> parse_double(std::string_view s)
{
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(value)) return std::nullopt;
    return value;
}

std::optional<long long> parse_int(std::string_view s)
{
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    long long value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return value;
}

std::string format_fixed(double value, int decimals)
{
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::fixed, decimals);
    std::string out(buf.data(), ptr);
    if (out.starts_with("-")) {
        // "-0.000" reads badly in tables
        bool all_zero = out.find_first_not_of("-0.") == std::string::npos;
        if (all_zero) out.erase(0, 1);
    }
    return out;
}

std::uint64_t fnv1a(std::string_view data)
{
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

} // namespace hardrank
