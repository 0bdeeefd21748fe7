#pragma once

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace genmine {

// Corpus component a document came from. Known components get their own
// kind; anything else is kept verbatim as Other.
class SourceTag {
 public:
  enum class Kind { RefinedWeb, SlimPajama, Pile, Pes2o, Arxiv, Other };

  SourceTag() = default;
  static SourceTag parse(std::string_view name);

  Kind kind() const { return kind_; }
  // Canonical lowercase name ("pile", "arxiv", ...) or the custom name.
  const std::string& name() const { return name_; }

  friend bool operator==(const SourceTag& a, const SourceTag& b) { return a.name_ == b.name_; }
  friend bool operator<(const SourceTag& a, const SourceTag& b) { return a.name_ < b.name_; }

 private:
  Kind kind_ = Kind::Other;
  std::string name_ = "other";
};

struct Document {
  std::string doc_id;
  SourceTag source;
  std::string text;
};

// A recoverable problem with one input unit (a JSONL line, a CoNLL-U block,
// a service request). The run continues; errors are tallied.
struct RecordError {
  std::string stage;
  std::string file;
  std::size_t line = 0;
  std::string reason;
  std::string detail;
};

struct IngestOptions {
  std::size_t max_doc_bytes = 10 * 1024 * 1024;
};

struct IngestTally {
  std::size_t lines = 0;
  std::size_t documents = 0;
  std::size_t malformed = 0;
  std::size_t missing_text = 0;
  std::size_t oversize = 0;
  std::size_t duplicate_id = 0;
};

// Streams documents from a newline-delimited JSON file. Lines are counted
// from 0; a record without "id" gets "<source>:<line>".
class DocumentReader {
 public:
  // Throws std::runtime_error if the file cannot be opened.
  DocumentReader(std::string path, SourceTag source, IngestOptions options = {},
                 std::unordered_set<std::string>* seen_ids = nullptr);

  std::optional<Document> next();

  const std::vector<RecordError>& errors() const { return errors_; }
  const IngestTally& tally() const { return tally_; }

 private:
  void fail(std::size_t line, std::string reason, std::string detail = {});

  std::string path_;
  SourceTag source_;
  IngestOptions options_;
  std::ifstream in_;
  std::size_t line_no_ = 0;
  std::unordered_set<std::string> own_ids_;
  std::unordered_set<std::string>* seen_ids_;
  std::vector<RecordError> errors_;
  IngestTally tally_;
};

// Reads a whole file. Record-level errors are appended to *errors if given.
std::vector<Document> load_documents(const std::string& path, const SourceTag& source,
                                     std::vector<RecordError>* errors = nullptr,
                                     IngestOptions options = {});

}  // namespace genmine
