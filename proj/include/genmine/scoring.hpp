#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "genmine/filters.hpp"
#include "genmine/http_retry.hpp"
#include "genmine/result.hpp"
#include "genmine/text_util.hpp"

namespace genmine {

// Unbounded real; classifier outputs above 1.0 are kept as-is.
struct GenericityScore {
  double value = 0.0;
  std::string scorer_id;
};

struct ScorerConfig {
  enum class Kind { HeuristicBaseline, ExternalService };

  Kind kind = Kind::HeuristicBaseline;
  std::optional<std::string> endpoint;  // required iff ExternalService
  double threshold = 0.8;
  std::size_t batch_size = 64;
  std::size_t max_in_flight = 4;
  RetryPolicy retry;
  std::string blocklist_path;  // empty = built-in list
  std::string stopwords_path;  // empty = built-in list

  // Throws std::invalid_argument on an inconsistent config.
  void validate() const;
};

// Removes the leading quantifier word. Throws std::invalid_argument unless
// the text (ignoring leading whitespace, case-insensitively) starts with q,
// optionally followed by punctuation, then whitespace.
std::string strip_quantifier(std::string_view text, Quantifier q);

// Inclusive threshold.
inline bool accept(const GenericityScore& s, const ScorerConfig& cfg) { return s.value >= cfg.threshold; }
inline bool accept(double value, double threshold) { return value >= threshold; }

struct ScoreBatchError {
  std::size_t batch = 0;
  std::size_t first = 0;  // item range [first, last)
  std::size_t last = 0;
  Error error;
};

struct ScoreResult {
  std::vector<std::optional<GenericityScore>> scores;  // aligned with input
  std::vector<ScoreBatchError> errors;
};

class Scorer {
 public:
  virtual ~Scorer() = default;
  virtual std::string id() const = 0;
  // Sentence text only; context is never sent.
  virtual ScoreResult score(std::span<const std::string> texts) = 0;
};

// Penalty phrase list for the heuristic scorer.
class Blocklist {
 public:
  static Blocklist parse(std::string_view text);
  static Blocklist from_file(const std::string& path);
  static const Blocklist& builtin();

  // First matching entry, or nullopt.
  std::optional<std::string> first_hit(std::string_view sentence) const;

 private:
  std::vector<std::vector<std::string>> phrases_;
  std::vector<std::string> symbols_;
  bool years_ = false;
};

// Deterministic rule scorer: 1.0, minus 0.5 for a blocklist hit, minus 0.5
// when the sentence looks like it opens with a repeated section title (the
// first two content words recur, adjacent, within the first eight words).
class HeuristicScorer final : public Scorer {
 public:
  HeuristicScorer();
  HeuristicScorer(Blocklist blocklist, WordSet stopwords);

  std::string id() const override { return "heuristic-baseline"; }
  ScoreResult score(std::span<const std::string> texts) override;

  double score_one(std::string_view text) const;
  bool blocklist_hit(std::string_view text) const { return blocklist_.first_hit(text).has_value(); }
  bool repeated_title(std::string_view text) const;

 private:
  Blocklist blocklist_;
  WordSet stopwords_;
};

// HTTP POST /score {"texts": [...]} -> {"scores": [...]}, batched; batches
// are sent concurrently up to max_in_flight and joined by batch index.
class ServiceScorer final : public Scorer {
 public:
  explicit ServiceScorer(const ScorerConfig& cfg);

  std::string id() const override { return "service:" + client_.config().base_url; }
  ScoreResult score(std::span<const std::string> texts) override;

  std::size_t requests() const { return client_.requests(); }

 private:
  std::size_t batch_size_;
  JsonPostClient client_;
};

WordSet builtin_stopwords();
WordSet load_stopwords(const std::string& path);  // empty path = built-in

std::unique_ptr<Scorer> make_scorer(const ScorerConfig& cfg);

}  // namespace genmine
