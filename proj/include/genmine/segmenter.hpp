#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "genmine/corpus_io.hpp"

namespace genmine {

struct SentenceSpan {
  std::string doc_id;
  std::size_t sent_index = 0;
  std::size_t char_start = 0;  // byte offsets into Document::text
  std::size_t char_end = 0;
  std::string text;

  friend bool operator==(const SentenceSpan&, const SentenceSpan&) = default;
};

class Segmenter {
 public:
  virtual ~Segmenter() = default;
  virtual std::vector<SentenceSpan> segment(const Document& doc) const = 0;
};

// Deterministic rule-based sentence splitter.
//
// A sentence ends after a run of '.', '!' or '?' (plus any closing quotes or
// brackets) when it is followed by whitespace and then an uppercase ASCII
// letter, a digit, or the end of the text. An opening quote or bracket may
// sit between the whitespace and that letter. A blank line always ends a
// sentence. Splits after listed abbreviations and single-letter initials are
// suppressed. Spans exclude surrounding whitespace.
class RuleSegmenter final : public Segmenter {
 public:
  RuleSegmenter();
  explicit RuleSegmenter(const std::vector<std::string>& abbreviations);

  std::vector<SentenceSpan> segment(const Document& doc) const override;

  static const std::vector<std::string>& default_abbreviations();

 private:
  bool is_abbreviation(std::string_view text, std::size_t dot_pos) const;

  std::unordered_set<std::string> abbreviations_;
};

std::vector<SentenceSpan> segment(const Document& doc);

}  // namespace genmine
