#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include <json.hpp>

#include "genmine/linguistic.hpp"
#include "genmine/text_util.hpp"

namespace genmine {

// ---------------------------------------------------------------------------
// Sentence length

// Number of maximal non-whitespace runs.
std::size_t word_count(std::string_view sentence);

struct LengthStats {
  std::map<std::size_t, std::size_t> histogram;  // word count -> sentences
  std::size_t n = 0;
  // Unset when n == 0.
  std::optional<double> mean;
  std::optional<double> stddev;  // population
  std::optional<std::size_t> median;  // lower middle for even n
};

class LengthAccumulator {
 public:
  void add_length(std::size_t words) { ++histogram_[words]; }
  void add(std::string_view sentence) { add_length(word_count(sentence)); }
  void merge(const LengthAccumulator& other);
  LengthStats stats() const;

 private:
  std::map<std::size_t, std::size_t> histogram_;
};

LengthStats length_stats(std::span<const std::string> sentences);

nlohmann::json to_json(const LengthStats& s);
// "length,percentage" rows, one per observed length.
std::string length_plot_csv(const LengthStats& s);

// ---------------------------------------------------------------------------
// Common words

using WordCount = std::pair<std::string, std::size_t>;

class WordCounter {
 public:
  // Lowercased whitespace tokens with surrounding punctuation stripped;
  // pure punctuation and stopwords are dropped.
  void add(std::string_view sentence, const WordSet& stopwords);
  void merge(const WordCounter& other);
  // Count descending, ties alphabetical.
  std::vector<WordCount> top(std::size_t k) const;

 private:
  std::unordered_map<std::string, std::size_t> counts_;
};

std::vector<WordCount> common_words(std::span<const std::string> sentences, const WordSet& stopwords,
                                    std::size_t k);

// ---------------------------------------------------------------------------
// Diversity from cosine similarity

using EmbeddingView = std::span<const float>;

struct GroupDiversity {
  std::optional<double> value;  // unset when fewer than 2 usable vectors
  std::size_t used = 0;
  std::size_t dropped_zero = 0;
};

// Negated mean pairwise cosine similarity over all unordered pairs of one
// group. Zero vectors are dropped. The pair similarities are summed in
// sorted order, so the result does not depend on the order of the group.
// Throws std::invalid_argument on mismatched dimensions.
GroupDiversity diversity_from_similarity(std::span<const EmbeddingView> group);

struct CosSimReport {
  std::optional<double> mean;  // over groups with a value
  std::optional<double> stddev;  // population
  std::size_t groups = 0;
  std::size_t groups_skipped = 0;
  std::size_t dropped_zero = 0;
  std::vector<double> per_group;
};

// Groups are independent and evaluated on up to `threads` workers; the
// reduction is in group order.
CosSimReport diversity_cossim(std::span<const std::vector<EmbeddingView>> groups, std::size_t threads = 1);

// ---------------------------------------------------------------------------
// Distinct n-grams

using Tokenizer = std::function<std::vector<std::string>(std::string_view)>;

// Whitespace split, punctuation strip, lowercase.
Tokenizer default_tokenizer();

class DistinctNgramAccumulator {
 public:
  explicit DistinctNgramAccumulator(std::vector<int> n_values = {1, 2, 3});

  // n-grams never span sentences.
  void add_tokens(const std::vector<std::string>& tokens);
  void merge(const DistinctNgramAccumulator& other);
  std::map<int, std::size_t> counts() const;

 private:
  std::vector<int> n_values_;
  std::map<int, std::unordered_set<std::string>> seen_;
};

struct DistinctReport {
  std::map<int, std::size_t> distinct;
  std::size_t tokens = 0;
  std::size_t sentences = 0;
};

// Consumes whole sentences, in order, until the running token count reaches
// `budget` (the sentence that crosses it is included). budget 0 = no limit.
DistinctReport distinct_n(std::span<const std::string> sentences, const Tokenizer& tokenizer,
                          std::vector<int> n_values = {1, 2, 3}, std::size_t budget = 1'000'000);

// ---------------------------------------------------------------------------
// Head lemmas

struct HeadLemmas {
  std::optional<std::string> subject;
  std::optional<std::string> verb;
  std::optional<std::string> object;
};

// Subject: leftmost nsubj/nsubj:pass NOUN/PROPN under the root. Verb: the
// root's cop/aux:pass dependent if any, else the root when VERB/AUX. Object:
// leftmost obj NOUN/PROPN under the root, else leftmost obl NOUN/PROPN.
// Lemmas are lowercased.
HeadLemmas extract_head_lemmas(const ParsedSentence& s);

struct HeadLemmaCounts {
  std::size_t subject = 0;
  std::size_t verb = 0;
  std::size_t object = 0;
  std::size_t sentences = 0;

  friend bool operator==(const HeadLemmaCounts&, const HeadLemmaCounts&) = default;
};

class HeadLemmaAccumulator {
 public:
  void add(const ParsedSentence& s);
  void merge(const HeadLemmaAccumulator& other);
  HeadLemmaCounts counts() const;

  const std::set<std::string>& subjects() const { return subject_; }
  const std::set<std::string>& verbs() const { return verb_; }
  const std::set<std::string>& objects() const { return object_; }

 private:
  std::set<std::string> subject_, verb_, object_;
  std::size_t sentences_ = 0;
};

// First `budget` parses (0 = all).
HeadLemmaCounts head_lemmas(std::span<const ParsedSentence> parses, std::size_t budget = 200'000);

// ---------------------------------------------------------------------------
// Report

struct DiversitySampling {
  std::size_t cossim_samples = 1000;
  std::size_t cossim_sample_size = 1000;
  std::size_t distinct_token_budget = 1'000'000;
  std::size_t lemma_sentence_budget = 200'000;
  std::uint64_t seed = 0;
};

struct DiversityReport {
  std::optional<CosSimReport> cossim;
  std::optional<DistinctReport> distinct;
  std::optional<HeadLemmaCounts> head_lemmas;
  DiversitySampling sampling;
};

nlohmann::json to_json(const DiversityReport& r);
std::string to_text(const DiversityReport& r);

}  // namespace genmine
