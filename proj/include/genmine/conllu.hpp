#pragma once

#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "genmine/corpus_io.hpp"
#include "genmine/linguistic.hpp"
#include "genmine/result.hpp"

namespace genmine {

enum class Metadata { Required, Optional };

// Parses one CoNLL-U sentence block (comment lines + token lines, no blank
// lines). Multiword ranges ("3-4") and empty nodes ("3.1") are skipped. The
// result is validated; failures carry a reason such as "bad-head", "cycle",
// "bad-columns" or "missing-metadata".
Result<ParsedSentence> parse_conllu_block(std::string_view block, Metadata metadata);

// Parses a string holding any number of blocks; stops at the first error.
Result<std::vector<ParsedSentence>> parse_conllu_text(std::string_view text, Metadata metadata);

// Serializes with "# doc_id", "# sent_index" and (if non-empty) "# text"
// comments, followed by a terminating blank line.
std::string to_conllu(const ParsedSentence& s);

// Streams sentence blocks from a CoNLL-U file. Invalid blocks are skipped
// and recorded in errors().
class ConlluReader {
 public:
  explicit ConlluReader(std::string path, Metadata metadata = Metadata::Required);

  std::optional<ParsedSentence> next();

  const std::vector<RecordError>& errors() const { return errors_; }
  std::size_t blocks_read() const { return blocks_; }

 private:
  std::string path_;
  Metadata metadata_;
  std::ifstream in_;
  std::size_t line_no_ = 0;
  std::size_t blocks_ = 0;
  std::vector<RecordError> errors_;
};

std::vector<ParsedSentence> read_parses(const std::string& path,
                                        std::vector<RecordError>* errors = nullptr);

}  // namespace genmine
