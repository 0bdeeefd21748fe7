#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace genmine {

// Universal POS tags.
enum class Upos : std::uint8_t {
  ADJ, ADP, ADV, AUX, CCONJ, DET, INTJ, NOUN, NUM, PART, PRON, PROPN, PUNCT, SCONJ, SYM, VERB, X
};

std::string_view upos_name(Upos u);
std::optional<Upos> parse_upos(std::string_view s);

using Features = std::map<std::string, std::string, std::less<>>;

// "A=B|C=D" -> map; "_" or "" -> empty. Returns nullopt on a malformed pair.
std::optional<Features> parse_feats(std::string_view s);
std::string format_feats(const Features& f);

struct Token {
  int index = 0;  // 1-based
  std::string form;
  std::string lemma;
  Upos upos = Upos::X;
  std::string xpos = "_";
  Features feats;
  int head = 0;  // 0 = root
  std::string deprel;
  std::string deps = "_";
  std::string misc = "_";

  // Empty view when the feature is absent.
  std::string_view feat(std::string_view key) const;

  friend bool operator==(const Token&, const Token&) = default;
};

struct SpanRef {
  std::string doc_id;
  std::size_t sent_index = 0;

  friend bool operator==(const SpanRef&, const SpanRef&) = default;
  friend auto operator<=>(const SpanRef&, const SpanRef&) = default;
};

struct ParsedSentence {
  SpanRef span_ref;
  std::string text;  // "# text = ..." when present
  std::vector<Token> tokens;  // indices 1..n in order

  // Token with the given 1-based index; precondition 1 <= i <= size.
  const Token& at(int index) const { return tokens[static_cast<std::size_t>(index - 1)]; }
  // Index of the root token, 0 if none.
  int root_index() const;
  // Leftmost dependent of `head` with the given relation, 0 if none.
  int child_with(int head, std::string_view deprel) const;

  friend bool operator==(const ParsedSentence&, const ParsedSentence&) = default;
};

// Checks the structural invariants: indices 1..n, head in range and not
// self, exactly the head-0 tokens carry "root", exactly one root, no cycles.
// Returns the failure reason, or nullopt when valid.
std::optional<std::string> validate(const ParsedSentence& s);

// A noun or proper noun with Number=Plur.
bool is_plural_noun(const Token& tok);

}  // namespace genmine
