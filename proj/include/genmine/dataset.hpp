#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "genmine/corpus_io.hpp"
#include "genmine/filters.hpp"
#include "genmine/scoring.hpp"

namespace genmine {

struct MGenRecord {
  std::string record_id;  // "<doc_id>#<sent_index>"
  std::string sentence;
  GenLabel label;
  GenericityScore score;
  SourceTag source;
  std::string doc_id;
  std::size_t sent_index = 0;
  std::size_t char_start = 0;
  std::size_t char_end = 0;
  std::optional<std::string> context;  // inline document text
};

std::string make_record_id(const std::string& doc_id, std::size_t sent_index);

nlohmann::json to_json(const MGenRecord& r);
// Throws std::invalid_argument on a malformed object.
MGenRecord record_from_json(const nlohmann::json& j);

// Orders by (doc_id, sent_index).
void sort_records(std::vector<MGenRecord>& records);

class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct SinkOptions {
  std::optional<double> min_score;  // set for the accepted-records sink
  bool inline_context = false;
};

// Newline-delimited JSON writer. Throws std::runtime_error when the target
// cannot be written and InvariantViolation when a record breaks the sink's
// contract (e.g. a score under the threshold on the accepted sink).
class RecordSink {
 public:
  RecordSink(const std::filesystem::path& path, SinkOptions options);

  // `context` is only written when inline_context is set.
  void emit(const MGenRecord& record, const std::string* context = nullptr);
  void close();
  std::size_t written() const { return written_; }

 private:
  std::filesystem::path path_;
  SinkOptions options_;
  std::ofstream out_;
  std::size_t written_ = 0;
};

std::vector<MGenRecord> read_records(const std::filesystem::path& path);

// Candidates and generalizations per label ("GEN" or quantifier word).
struct CountsTable {
  std::map<std::string, std::size_t> candidates;
  std::map<std::string, std::size_t> generalizations;
  std::size_t candidates_total = 0;
  std::size_t generalizations_total = 0;

  friend bool operator==(const CountsTable&, const CountsTable&) = default;
};

// Mergeable per-worker counter.
class TallyAccumulator {
 public:
  void add(const GenLabel& label, bool accepted);
  void merge(const TallyAccumulator& other);
  CountsTable table() const;

 private:
  std::map<std::string, std::pair<std::size_t, std::size_t>> counts_;
};

struct TallyItem {
  GenLabel label;
  bool accepted = false;
};

CountsTable tally(std::span<const TallyItem> items);

// Row order: GEN, then the quantifiers in inventory order; every row present.
std::vector<std::string> label_rows();

nlohmann::json to_json(const CountsTable& t);
std::string to_text_table(const CountsTable& t);

// One UTF-8 text file per document under <dir>, named by an escaped doc_id.
class DocumentStore {
 public:
  explicit DocumentStore(std::filesystem::path dir);

  void put(const Document& doc);
  std::optional<std::string> get(const std::string& doc_id) const;
  std::filesystem::path path_for(const std::string& doc_id) const;

  static std::string escape_id(const std::string& doc_id);

 private:
  std::filesystem::path dir_;
};

}  // namespace genmine
