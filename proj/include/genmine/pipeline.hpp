#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "genmine/analysis.hpp"
#include "genmine/corpus_io.hpp"
#include "genmine/dataset.hpp"
#include "genmine/filters.hpp"
#include "genmine/linguistic.hpp"
#include "genmine/scoring.hpp"

namespace genmine {

// ---------------------------------------------------------------------------
// Per-sentence decision

enum class SentenceStage : std::uint8_t {
  Prefiltered,        // rejected by the cheap gate
  QuantifierNotLeaf,  // quantifier-initial, but the quantifier token has dependents
  StripFailed,        // quantifier-initial, but the text does not start with the word
  SyntaxFailed,       // is_bare_plural rejected it
  Candidate,
};

std::string_view stage_name(SentenceStage s);

struct SentenceEvaluation {
  SentenceStage stage = SentenceStage::Prefiltered;
  PrefilterOutcome pre = Reject{};
  BarePluralCheck check;
  GenLabel label;
  std::string scored_text;  // set for candidates; quantifier stripped when initial
};

// Prefilter, syntactic filter and labelling for one parsed sentence.
SentenceEvaluation evaluate_sentence(const ParsedSentence& parsed);

// ---------------------------------------------------------------------------
// Run

struct InputSpec {
  std::string path;
  SourceTag source;
};

struct RunConfig {
  std::vector<InputSpec> inputs;
  std::vector<std::string> parse_files;  // CoNLL-U; exclusive with parser_url
  std::optional<std::string> parser_url;
  std::size_t parser_batch_size = 32;
  ScorerConfig scorer;  // scorer.threshold is the acceptance threshold
  std::filesystem::path out_dir;
  bool emit_candidates = false;
  bool inline_context = false;
  std::size_t workers = 1;
  std::uint64_t seed = 0;
  IngestOptions ingest;
  std::size_t chunk_documents = 1024;

  // Throws std::invalid_argument.
  void validate() const;
};

nlohmann::json to_json(const RunConfig& cfg);

// A stage that cannot continue. The CLI maps it to exit code 2.
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage, const std::string& what)
      : std::runtime_error(stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

struct RunSummary {
  std::size_t documents = 0;
  std::size_t sentences = 0;
  std::size_t annotated = 0;
  std::size_t candidates = 0;
  std::size_t accepted = 0;
  std::size_t round_trip_checked = 0;
  std::map<std::string, std::size_t> funnel;  // stage -> sentences
  std::map<std::string, std::size_t> errors;  // "stage:reason" -> count
  CountsTable counts;
  LengthStats lengths;
};

// Writes into cfg.out_dir:
//   records.jsonl        accepted records, sorted by (doc_id, sent_index)
//   candidates.jsonl     every scored candidate (with --emit-candidates)
//   counts.json/.txt     candidates and generalizations per label
//   length_stats.json, length_hist.csv
//   errors.jsonl         record-level errors
//   manifest.json        config, input digests, version, tallies
//   docs/                context documents (by-reference mode)
// Throws std::invalid_argument for a bad config, std::runtime_error for IO
// failures and StageError when a stage fails as a whole.
RunSummary mine(const RunConfig& cfg);

nlohmann::json to_json(const RunSummary& s);

}  // namespace genmine
