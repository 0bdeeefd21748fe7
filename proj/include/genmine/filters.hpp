#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>

#include "genmine/linguistic.hpp"

namespace genmine {

enum class Quantifier : std::uint8_t {
  All, Most, Many, Some, Few, No, Often, Generally, Typically, Usually, Normally
};

// The eleven quantifiers, split into determiner-like words
// (all most many some few no) and adverbials
// (often generally typically usually normally).
class QuantifierInventory {
 public:
  static const QuantifierInventory& standard();

  static constexpr std::size_t kSize = 11;

  std::span<const Quantifier> all() const { return order_; }
  // Lookup on an already-lowercased word.
  std::optional<Quantifier> lookup(std::string_view lower_word) const;
  static bool is_adverbial(Quantifier q);
  static std::string_view name(Quantifier q);
  static std::optional<Quantifier> parse(std::string_view name);

 private:
  QuantifierInventory();
  std::array<Quantifier, kSize> order_;
};

struct QuantifierInitial {
  Quantifier quantifier;
  friend bool operator==(const QuantifierInitial&, const QuantifierInitial&) = default;
};
struct PluralEarly {
  int position;  // 1..4, word position of the first plural noun
  friend bool operator==(const PluralEarly&, const PluralEarly&) = default;
};
struct Reject {
  friend bool operator==(const Reject&, const Reject&) = default;
};
using PrefilterOutcome = std::variant<QuantifierInitial, PluralEarly, Reject>;

// Cheap gate on the first words of a sentence. PUNCT tokens are not words.
// A sentence-initial quantifier wins over an early plural noun; a
// sentence-initial "no" followed by a comma is a discourse marker and
// rejects. Never looks past the fourth word.
PrefilterOutcome prefilter(std::span<const Token> tokens,
                           const QuantifierInventory& inventory = QuantifierInventory::standard());

enum class FailReason : std::uint8_t { NoPluralSubject, BadRoot, BadVerbFeats };
std::string_view fail_reason_name(FailReason r);

struct BarePluralCheck {
  bool passed = false;
  std::optional<int> subject_index;
  std::optional<int> verb_index;
  std::optional<FailReason> fail_reason;

  friend bool operator==(const BarePluralCheck&, const BarePluralCheck&) = default;
};

// Syntactic bare-plural test:
//  1. a plural NOUN/PROPN attached to the root as nsubj or nsubj:pass
//     (leftmost if several);
//  2. the verb is the root's cop or aux:pass dependent when it has one,
//     otherwise the root itself if it is VERB or AUX;
//  3. the verb carries Tense=Pres, Mood=Ind, Number=Plur and Person=3.
BarePluralCheck is_bare_plural(const ParsedSentence& parsed);

// Drops a leading leaf token (the quantifier of a quantifier-initial
// sentence) and renumbers the rest. nullopt if token 1 has dependents or is
// the root.
std::optional<ParsedSentence> drop_first_token(const ParsedSentence& parsed);

enum class QuantPosition : std::uint8_t { Initial, PreVerbal, PostVerbal };
std::string_view position_name(QuantPosition p);
std::optional<QuantPosition> parse_position(std::string_view s);

struct GenLabel {
  std::optional<Quantifier> quantifier;  // nullopt = generic
  QuantPosition position = QuantPosition::Initial;

  static GenLabel generic() { return {}; }
  static GenLabel quantified(Quantifier q, QuantPosition p) { return {q, p}; }
  bool is_generic() const { return !quantifier.has_value(); }
  // "GEN" or the quantifier word.
  std::string name() const;

  friend bool operator==(const GenLabel&, const GenLabel&) = default;
};

// Labels a sentence that passed is_bare_plural. Quantifier-initial
// sentences take the prefilter's quantifier. Otherwise an adverbial
// quantifier whose head is the root (or the selected copula/auxiliary)
// labels the sentence; its position is pre-verbal when it precedes the
// clause's lexical head (the root), post-verbal otherwise. Quantifier words
// outside the main clause leave the sentence generic.
GenLabel detect_label(const ParsedSentence& parsed, const PrefilterOutcome& prefilter,
                      const BarePluralCheck& check,
                      const QuantifierInventory& inventory = QuantifierInventory::standard());
GenLabel detect_label(const ParsedSentence& parsed, const PrefilterOutcome& prefilter,
                      const QuantifierInventory& inventory = QuantifierInventory::standard());

}  // namespace genmine
