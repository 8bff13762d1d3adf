#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hardrank {

/// A lowercased token and the byte range it came from.
struct TokenSpan {
    std::string term;
    std::size_t begin = 0;
    std::size_t end = 0;
};

/// Lowercase, split on non-alphanumeric ASCII, drop empty tokens.
std::vector<std::string> tokenize(std::string_view text);
std::vector<TokenSpan> tokenize_spans(std::string_view text);

/// Whitespace split without any normalization.
std::vector<std::string> split_whitespace(std::string_view text);

std::string_view trim(std::string_view s);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

/// Fixed 100-word English stopword list.
bool is_stopword(std::string_view lowercase_term);
std::size_t stopword_count();

/// Shortest decimal form that parses back to the same double.
std::string format_double(double value);
std::optional<double> parse_double(std::string_view s);
std::optional<long long> parse_int(std::string_view s);

/// Fixed-point rendering with `decimals` digits.
std::string format_fixed(double value, int decimals);

/// 64-bit FNV-1a, used for run tags and seeding.
std::uint64_t fnv1a(std::string_view data);

} // namespace hardrank
