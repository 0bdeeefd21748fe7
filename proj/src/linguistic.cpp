#include "genmine/linguistic.hpp"

#include <array>

namespace genmine {

namespace {

constexpr std::array<std::string_view, 17> kUposNames = {
    "ADJ", "ADP", "ADV", "AUX", "CCONJ", "DET", "INTJ", "NOUN", "NUM",
    "PART", "PRON", "PROPN", "PUNCT", "SCONJ", "SYM", "VERB", "X"};

}  // namespace

std::string_view upos_name(Upos u) { return kUposNames[static_cast<std::size_t>(u)]; }

std::optional<Upos> parse_upos(std::string_view s) {
  if (s == "_") return Upos::X;
  for (std::size_t i = 0; i < kUposNames.size(); ++i) {
    if (kUposNames[i] == s) return static_cast<Upos>(i);
  }
  return std::nullopt;
}

std::optional<Features> parse_feats(std::string_view s) {
  Features out;
  if (s.empty() || s == "_") return out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t bar = s.find('|', pos);
    if (bar == std::string_view::npos) bar = s.size();
    std::string_view pair = s.substr(pos, bar - pos);
    std::size_t eq = pair.find('=');
    if (eq == std::string_view::npos || eq == 0 || eq + 1 == pair.size()) return std::nullopt;
    out.emplace(std::string(pair.substr(0, eq)), std::string(pair.substr(eq + 1)));
    pos = bar + 1;
  }
  return out;
}

std::string format_feats(const Features& f) {
  if (f.empty()) return "_";
  std::string out;
  for (const auto& [k, v] : f) {
    if (!out.empty()) out.push_back('|');
    out += k;
    out.push_back('=');
    out += v;
  }
  return out;
}

std::string_view Token::feat(std::string_view key) const {
  auto it = feats.find(key);
  return it == feats.end() ? std::string_view{} : std::string_view{it->second};
}

int ParsedSentence::root_index() const {
  for (const Token& t : tokens) {
    if (t.head == 0) return t.index;
  }
  return 0;
}

int ParsedSentence::child_with(int head, std::string_view deprel) const {
  for (const Token& t : tokens) {
    if (t.head == head && t.deprel == deprel) return t.index;
  }
  return 0;
}

std::optional<std::string> validate(const ParsedSentence& s) {
  const int n = static_cast<int>(s.tokens.size());
  if (n == 0) return "empty";
  int roots = 0;
  for (int i = 0; i < n; ++i) {
    const Token& t = s.tokens[static_cast<std::size_t>(i)];
    if (t.index != i + 1) return "bad-index";
    if (t.head < 0 || t.head > n) return "bad-head";
    if (t.head == t.index) return "self-head";
    if ((t.head == 0) != (t.deprel == "root")) return "bad-root-deprel";
    if (t.head == 0) ++roots;
  }
  if (roots == 0) return "no-root";
  if (roots > 1) return "multiple-roots";

  // Every chain of heads must reach 0 within n steps.
  std::vector<char> reaches_root(static_cast<std::size_t>(n + 1), 0);
  reaches_root[0] = 1;
  for (int i = 1; i <= n; ++i) {
    int cur = i;
    int steps = 0;
    while (!reaches_root[static_cast<std::size_t>(cur)]) {
      cur = s.at(cur).head;
      if (++steps > n) return "cycle";
    }
    cur = i;
    while (!reaches_root[static_cast<std::size_t>(cur)]) {
      reaches_root[static_cast<std::size_t>(cur)] = 1;
      cur = s.at(cur).head;
    }
  }
  return std::nullopt;
}

bool is_plural_noun(const Token& tok) {
  return (tok.upos == Upos::NOUN || tok.upos == Upos::PROPN) && tok.feat("Number") == "Plur";
}

}  // namespace genmine
