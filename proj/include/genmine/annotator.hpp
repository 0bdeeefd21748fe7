#pragma once

#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "genmine/http_retry.hpp"
#include "genmine/linguistic.hpp"
#include "genmine/lru_cache.hpp"
#include "genmine/result.hpp"
#include "genmine/segmenter.hpp"

namespace genmine {

// Source of UD annotations for segmented sentences.
class Annotator {
 public:
  virtual ~Annotator() = default;
  virtual Result<ParsedSentence> annotate(const SentenceSpan& span) = 0;
  // Results are aligned with the input spans.
  virtual std::vector<Result<ParsedSentence>> annotate_batch(std::span<const SentenceSpan> spans);
};

// Batch mode: parses loaded from CoNLL-U files, looked up by
// (doc_id, sent_index). A stored "# text" must equal the span text.
class ParseStore final : public Annotator {
 public:
  void add(ParsedSentence s);
  // Loads every valid block; invalid blocks are appended to *errors.
  void load_file(const std::string& path, std::vector<RecordError>* errors = nullptr);

  Result<ParsedSentence> annotate(const SentenceSpan& span) override;
  std::size_t size() const { return parses_.size(); }

 private:
  std::map<SpanRef, ParsedSentence> parses_;
};

struct ServiceAnnotatorConfig {
  HttpClientConfig http;
  std::size_t cache_capacity = 1'000'000;
  std::size_t batch_size = 32;
};

// Streaming mode: HTTP POST /parse {"texts": [...]} -> {"conllu": [...]}.
// Responses are validated like file input and cached by sentence text.
class ServiceAnnotator final : public Annotator {
 public:
  explicit ServiceAnnotator(ServiceAnnotatorConfig config);

  Result<ParsedSentence> annotate(const SentenceSpan& span) override;
  std::vector<Result<ParsedSentence>> annotate_batch(std::span<const SentenceSpan> spans) override;

  std::size_t service_calls() const { return client_.requests(); }
  std::size_t cache_size() const { return cache_.size(); }

 private:
  // Parses for distinct texts, one request per chunk of batch_size.
  std::vector<Result<ParsedSentence>> fetch(const std::vector<std::string>& texts);

  ServiceAnnotatorConfig config_;
  JsonPostClient client_;
  LruCache<std::string, ParsedSentence> cache_;
};

}  // namespace genmine
