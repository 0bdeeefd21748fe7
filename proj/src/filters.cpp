#include "genmine/filters.hpp"

#include "genmine/text_util.hpp"

namespace genmine {

namespace {

constexpr std::array<std::string_view, QuantifierInventory::kSize> kNames = {
    "all", "most", "many", "some", "few", "no", "often", "generally", "typically", "usually", "normally"};

bool is_subject_rel(std::string_view deprel) { return deprel == "nsubj" || deprel == "nsubj:pass"; }

}  // namespace

QuantifierInventory::QuantifierInventory() {
  for (std::size_t i = 0; i < kSize; ++i) order_[i] = static_cast<Quantifier>(i);
}

const QuantifierInventory& QuantifierInventory::standard() {
  static const QuantifierInventory kInventory;
  return kInventory;
}

std::optional<Quantifier> QuantifierInventory::lookup(std::string_view lower_word) const {
  return parse(lower_word);
}

bool QuantifierInventory::is_adverbial(Quantifier q) {
  return static_cast<std::uint8_t>(q) >= static_cast<std::uint8_t>(Quantifier::Often);
}

std::string_view QuantifierInventory::name(Quantifier q) { return kNames[static_cast<std::size_t>(q)]; }

std::optional<Quantifier> QuantifierInventory::parse(std::string_view name) {
  for (std::size_t i = 0; i < kSize; ++i) {
    if (kNames[i] == name) return static_cast<Quantifier>(i);
  }
  return std::nullopt;
}

PrefilterOutcome prefilter(std::span<const Token> tokens, const QuantifierInventory& inventory) {
  int word = 0;
  for (std::size_t i = 0; i < tokens.size() && word < 4; ++i) {
    const Token& tok = tokens[i];
    if (tok.upos == Upos::PUNCT) continue;
    ++word;
    if (word == 1) {
      std::string first = lowercase(strip_punct(tok.form));
      if (auto q = inventory.lookup(first)) {
        if (*q == Quantifier::No) {
          const bool comma_attached = !tok.form.empty() && tok.form.back() == ',';
          const bool comma_next = i + 1 < tokens.size() && tokens[i + 1].form == ",";
          if (comma_attached || comma_next) return Reject{};
        }
        return QuantifierInitial{*q};
      }
    }
    if (is_plural_noun(tok)) return PluralEarly{word};
  }
  return Reject{};
}

std::string_view fail_reason_name(FailReason r) {
  switch (r) {
    case FailReason::NoPluralSubject: return "no-plural-subject";
    case FailReason::BadRoot: return "bad-root";
    case FailReason::BadVerbFeats: return "bad-verb-feats";
  }
  return "unknown";
}

BarePluralCheck is_bare_plural(const ParsedSentence& parsed) {
  BarePluralCheck out;
  const int root = parsed.root_index();
  if (root == 0) {
    out.fail_reason = FailReason::BadRoot;
    return out;
  }

  int subject = 0;
  for (const Token& t : parsed.tokens) {
    if (t.head == root && is_subject_rel(t.deprel) && is_plural_noun(t)) {
      subject = t.index;
      break;
    }
  }
  if (subject == 0) {
    out.fail_reason = FailReason::NoPluralSubject;
    return out;
  }
  out.subject_index = subject;

  int verb = 0;
  for (const Token& t : parsed.tokens) {
    if (t.head == root && (t.deprel == "cop" || t.deprel == "aux:pass")) {
      verb = t.index;
      break;
    }
  }
  if (verb == 0) {
    const Upos u = parsed.at(root).upos;
    if (u == Upos::VERB || u == Upos::AUX) verb = root;
  }
  if (verb == 0) {
    out.fail_reason = FailReason::BadRoot;
    return out;
  }
  out.verb_index = verb;

  const Token& v = parsed.at(verb);
  if (v.feat("Tense") != "Pres" || v.feat("Mood") != "Ind" || v.feat("Number") != "Plur" ||
      v.feat("Person") != "3") {
    out.fail_reason = FailReason::BadVerbFeats;
    return out;
  }
  out.passed = true;
  return out;
}

std::optional<ParsedSentence> drop_first_token(const ParsedSentence& parsed) {
  if (parsed.tokens.size() < 2) return std::nullopt;
  const Token& first = parsed.tokens.front();
  if (first.head == 0) return std::nullopt;
  for (const Token& t : parsed.tokens) {
    if (t.head == 1) return std::nullopt;
  }
  ParsedSentence out;
  out.span_ref = parsed.span_ref;
  out.tokens.reserve(parsed.tokens.size() - 1);
  for (std::size_t i = 1; i < parsed.tokens.size(); ++i) {
    Token t = parsed.tokens[i];
    t.index -= 1;
    if (t.head > 0) t.head -= 1;
    out.tokens.push_back(std::move(t));
  }
  if (!parsed.text.empty()) {
    std::string_view rest = trim(parsed.text);
    std::size_t ws = 0;
    while (ws < rest.size() && !is_space(rest[ws])) ++ws;
    out.text = std::string(trim(rest.substr(ws)));
  }
  return out;
}

std::string_view position_name(QuantPosition p) {
  switch (p) {
    case QuantPosition::Initial: return "initial";
    case QuantPosition::PreVerbal: return "pre-verbal";
    case QuantPosition::PostVerbal: return "post-verbal";
  }
  return "initial";
}

std::optional<QuantPosition> parse_position(std::string_view s) {
  if (s == "initial") return QuantPosition::Initial;
  if (s == "pre-verbal") return QuantPosition::PreVerbal;
  if (s == "post-verbal") return QuantPosition::PostVerbal;
  return std::nullopt;
}

std::string GenLabel::name() const {
  return quantifier ? std::string(QuantifierInventory::name(*quantifier)) : std::string("GEN");
}

GenLabel detect_label(const ParsedSentence& parsed, const PrefilterOutcome& pre,
                      const BarePluralCheck& check, const QuantifierInventory& inventory) {
  if (const auto* qi = std::get_if<QuantifierInitial>(&pre)) {
    return GenLabel::quantified(qi->quantifier, QuantPosition::Initial);
  }
  const int root = parsed.root_index();
  if (root == 0) return GenLabel::generic();
  const int verb = check.verb_index.value_or(root);
  for (const Token& t : parsed.tokens) {
    if (t.head != root && t.head != verb) continue;
    auto q = inventory.lookup(lowercase(t.form));
    if (!q || !QuantifierInventory::is_adverbial(*q)) continue;
    return GenLabel::quantified(*q, t.index < root ? QuantPosition::PreVerbal : QuantPosition::PostVerbal);
  }
  return GenLabel::generic();
}

GenLabel detect_label(const ParsedSentence& parsed, const PrefilterOutcome& pre,
                      const QuantifierInventory& inventory) {
  return detect_label(parsed, pre, is_bare_plural(parsed), inventory);
}

}  // namespace genmine
