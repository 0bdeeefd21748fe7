#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "genmine/result.hpp"

namespace genmine {

enum class Judgment : std::uint8_t { Generic, Particular, Unclear };

std::string_view judgment_name(Judgment j);
// Case-insensitive; nullopt for anything outside the three labels.
std::optional<Judgment> parse_judgment(std::string_view s);

struct AnnotationLabel {
  std::string record_id;
  std::string annotator_id;
  Judgment label = Judgment::Unclear;
  std::string timestamp;  // UTC, "YYYY-MM-DDTHH:MM:SSZ"

  friend bool operator==(const AnnotationLabel&, const AnnotationLabel&) = default;
};

std::string utc_timestamp_now();
bool is_utc_timestamp(std::string_view s);

nlohmann::json to_json(const AnnotationLabel& l);
// Missing timestamp is filled with the current time. Errors: "bad-field",
// "bad-label", "bad-timestamp".
Result<AnnotationLabel> label_from_json(const nlohmann::json& j);

struct AgreementReport {
  std::size_t n_items = 0;  // records with at least one label
  std::size_t n_double_labeled = 0;
  std::size_t n_labels = 0;
  std::size_t n_annotators = 0;
  std::optional<double> percent_agreement;  // unset with no double-labeled items
  std::map<std::string, double> distribution;  // label -> percentage, pooled
  std::optional<double> cohen_kappa;  // only with exactly two annotators

  friend bool operator==(const AgreementReport&, const AgreementReport&) = default;
};

// Over the final label per (record_id, annotator_id); later entries win.
AgreementReport agreement(std::span<const AnnotationLabel> labels);
nlohmann::json to_json(const AgreementReport& r);

// Uniform without replacement, in draw order; n capped at ids.size().
// Throws std::invalid_argument on an empty dataset.
std::vector<std::string> sample_batch(std::span<const std::string> ids, std::size_t n, std::uint64_t seed);

// Append-only JSONL label log. Opening replays the file; each record()
// appends one line and is flushed before returning. Thread-safe.
class LabelLog {
 public:
  explicit LabelLog(std::filesystem::path path);

  // Returns true when it overwrote an earlier label by the same annotator.
  bool record(const AnnotationLabel& label);

  std::vector<AnnotationLabel> final_labels() const;  // sorted by (record, annotator)
  std::optional<Judgment> label_of(const std::string& record_id, const std::string& annotator_id) const;
  std::size_t lines() const;
  std::size_t overwrites() const;
  std::size_t skipped_lines() const { return skipped_; }
  AgreementReport report() const;

 private:
  bool apply(const AnnotationLabel& label);

  std::filesystem::path path_;
  mutable std::mutex mu_;
  std::map<std::pair<std::string, std::string>, AnnotationLabel> final_;
  std::size_t lines_ = 0;
  std::size_t overwrites_ = 0;
  std::size_t skipped_ = 0;
};

struct AnnotationItem {
  std::string record_id;
  std::string sentence;
  std::string context_excerpt;  // first 500 code points of the context document
};

constexpr std::size_t kContextExcerptChars = 500;

// Samples n records from <run_dir>/records.jsonl and resolves their context
// from the inline field or the run's document store.
std::vector<AnnotationItem> load_annotation_batch(const std::filesystem::path& run_dir, std::size_t n,
                                                  std::uint64_t seed);

struct AnnotationServerConfig {
  std::filesystem::path run_dir;
  std::size_t n = 300;
  std::uint64_t seed = 0;
  std::filesystem::path ui_dir;  // empty = built-in page
  std::string host = "127.0.0.1";
  int port = 0;  // 0 = ephemeral
};

// HTTP front end: GET /api/batch, POST /api/label, GET /api/report, static
// files at /. Labels go to <run_dir>/annotations/labels.jsonl.
class AnnotationServer {
 public:
  explicit AnnotationServer(AnnotationServerConfig config);
  ~AnnotationServer();
  AnnotationServer(const AnnotationServer&) = delete;
  AnnotationServer& operator=(const AnnotationServer&) = delete;

  // Binds and returns the bound port. Throws std::runtime_error on failure.
  int bind();
  // Blocks until stop().
  void listen();
  // bind() + listen() on a background thread.
  int start();
  void stop();

  int port() const { return port_; }
  const std::vector<AnnotationItem>& batch() const { return batch_; }
  LabelLog& log() { return log_; }

 private:
  struct Impl;
  AnnotationServerConfig config_;
  std::vector<AnnotationItem> batch_;
  std::map<std::string, std::size_t> index_;
  LabelLog log_;
  std::unique_ptr<Impl> impl_;
  int port_ = 0;
};

}  // namespace genmine
