#pragma once

#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace genmine {

// ASCII-only character classes. Bytes >= 0x80 are never whitespace,
// punctuation or uppercase here; UTF-8 continuation bytes pass through.
constexpr bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
}
constexpr bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
constexpr bool is_lower(char c) { return c >= 'a' && c <= 'z'; }
constexpr bool is_digit(char c) { return c >= '0' && c <= '9'; }
constexpr bool is_alpha(char c) { return is_upper(c) || is_lower(c); }
constexpr bool is_alnum(char c) { return is_alpha(c) || is_digit(c); }
constexpr bool is_punct(char c) {
  return (c >= '!' && c <= '/') || (c >= ':' && c <= '@') || (c >= '[' && c <= '`') ||
         (c >= '{' && c <= '~');
}
constexpr char to_lower(char c) { return is_upper(c) ? static_cast<char>(c - 'A' + 'a') : c; }

std::string lowercase(std::string_view s);

std::string_view trim(std::string_view s);

// Strips leading and trailing ASCII punctuation.
std::string_view strip_punct(std::string_view s);

// Maximal runs of non-whitespace.
std::vector<std::string_view> split_whitespace(std::string_view s);

// Whitespace split, punctuation strip, lowercase; empty results dropped.
std::vector<std::string> normalized_words(std::string_view s);

bool is_all_punct(std::string_view s);

// Parses a plain-text word list: one entry per line, '#' starts a comment
// line, blank lines ignored, entries trimmed and lowercased.
std::vector<std::string> parse_word_list(std::string_view text);
std::vector<std::string> read_word_list(const std::string& path);

using WordSet = std::unordered_set<std::string>;

// Truncates to at most max_chars UTF-8 code points.
std::string utf8_prefix(std::string_view s, std::size_t max_chars);

}  // namespace genmine
