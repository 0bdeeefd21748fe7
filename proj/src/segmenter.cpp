#include "genmine/segmenter.hpp"

#include "genmine/text_util.hpp"

namespace genmine {

namespace {

constexpr bool is_terminator(char c) { return c == '.' || c == '!' || c == '?'; }
constexpr bool is_closing(char c) { return c == '"' || c == '\'' || c == ')' || c == ']' || c == '}'; }
constexpr bool is_opening(char c) { return c == '"' || c == '\'' || c == '(' || c == '['; }
constexpr bool is_blank(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

std::size_t skip_space(std::string_view s, std::size_t i) {
  while (i < s.size() && is_space(s[i])) ++i;
  return i;
}

}  // namespace

const std::vector<std::string>& RuleSegmenter::default_abbreviations() {
  static const std::vector<std::string> kList = {
      "dr.",   "mr.",  "mrs.", "ms.",  "prof.", "st.",  "jr.",  "sr.",  "e.g.",
      "i.e.",  "etc.", "fig.", "figs.", "eq.",  "eqs.", "vs.",  "cf.",  "al.",
      "approx.", "no.", "nos.", "vol.", "pp.",  "p.",   "ca.",  "inc.", "ltd.",
      "co.",   "corp.", "dept.", "sec.", "ref.", "refs.", "tab.", "ch.", "u.s.",
  };
  return kList;
}

RuleSegmenter::RuleSegmenter() : RuleSegmenter(default_abbreviations()) {}

RuleSegmenter::RuleSegmenter(const std::vector<std::string>& abbreviations) {
  for (const auto& a : abbreviations) abbreviations_.insert(lowercase(a));
}

bool RuleSegmenter::is_abbreviation(std::string_view text, std::size_t dot_pos) const {
  std::size_t b = dot_pos;
  while (b > 0 && !is_space(text[b - 1])) --b;
  while (b < dot_pos && is_opening(text[b])) ++b;
  std::string_view word = text.substr(b, dot_pos + 1 - b);
  if (word.size() == 2 && is_upper(word[0])) return true;  // initials: "J. Smith"
  return abbreviations_.count(lowercase(word)) > 0;
}

std::vector<SentenceSpan> RuleSegmenter::segment(const Document& doc) const {
  std::vector<SentenceSpan> spans;
  const std::string_view text = doc.text;
  const std::size_t n = text.size();

  auto emit = [&](std::size_t a, std::size_t b) {
    while (a < b && is_space(text[a])) ++a;
    while (b > a && is_space(text[b - 1])) --b;
    if (b <= a) return;
    spans.push_back(SentenceSpan{doc.doc_id, spans.size(), a, b, std::string(text.substr(a, b - a))});
  };

  std::size_t start = skip_space(text, 0);
  std::size_t i = start;
  while (i < n) {
    const char c = text[i];
    if (c == '\n') {
      std::size_t k = i + 1;
      while (k < n && is_blank(text[k])) ++k;
      if (k < n && text[k] == '\n') {
        emit(start, i);
        start = skip_space(text, k);
        i = start;
        continue;
      }
      ++i;
      continue;
    }
    if (!is_terminator(c)) {
      ++i;
      continue;
    }

    std::size_t j = i;
    while (j < n && is_terminator(text[j])) ++j;
    const bool single_dot = (j - i == 1) && c == '.';
    const std::size_t term_pos = i;
    while (j < n && is_closing(text[j])) ++j;
    if (j == n) {
      emit(start, n);
      start = n;
      break;
    }
    if (!is_space(text[j])) {
      i = j;
      continue;
    }
    const std::size_t k = skip_space(text, j);
    bool boundary = (k == n);
    if (!boundary) {
      std::size_t m = k;
      while (m < n && is_opening(text[m])) ++m;
      boundary = m < n && (is_upper(text[m]) || is_digit(text[m]));
    }
    if (boundary && single_dot && is_abbreviation(text, term_pos)) boundary = false;
    if (boundary) {
      emit(start, j);
      start = k;
      i = k;
    } else {
      // Rescan the whitespace so a blank line inside it still splits.
      i = j;
    }
  }
  if (start < n) emit(start, n);
  return spans;
}

std::vector<SentenceSpan> segment(const Document& doc) {
  static const RuleSegmenter kDefault;
  return kDefault.segment(doc);
}

}  // namespace genmine
