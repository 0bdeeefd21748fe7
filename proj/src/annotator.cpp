#include "genmine/annotator.hpp"

#include <future>
#include <unordered_map>
#include <utility>

#include "genmine/conllu.hpp"

namespace genmine {

std::vector<Result<ParsedSentence>> Annotator::annotate_batch(std::span<const SentenceSpan> spans) {
  std::vector<Result<ParsedSentence>> out;
  out.reserve(spans.size());
  for (const auto& s : spans) out.push_back(annotate(s));
  return out;
}

void ParseStore::add(ParsedSentence s) {
  SpanRef key = s.span_ref;
  parses_.insert_or_assign(std::move(key), std::move(s));
}

void ParseStore::load_file(const std::string& path, std::vector<RecordError>* errors) {
  ConlluReader reader(path);
  while (auto s = reader.next()) add(std::move(*s));
  if (errors != nullptr) errors->insert(errors->end(), reader.errors().begin(), reader.errors().end());
}

Result<ParsedSentence> ParseStore::annotate(const SentenceSpan& span) {
  auto it = parses_.find(SpanRef{span.doc_id, span.sent_index});
  if (it == parses_.end()) {
    return Error{"missing-parse", span.doc_id + "#" + std::to_string(span.sent_index)};
  }
  if (!it->second.text.empty() && it->second.text != span.text) {
    return Error{"text-mismatch", span.doc_id + "#" + std::to_string(span.sent_index)};
  }
  return it->second;
}

ServiceAnnotator::ServiceAnnotator(ServiceAnnotatorConfig config)
    : config_(std::move(config)), client_(config_.http), cache_(config_.cache_capacity) {}

std::vector<Result<ParsedSentence>> ServiceAnnotator::fetch(const std::vector<std::string>& texts) {
  const std::size_t batch = config_.batch_size == 0 ? 1 : config_.batch_size;
  std::vector<std::future<std::vector<Result<ParsedSentence>>>> pending;
  for (std::size_t begin = 0; begin < texts.size(); begin += batch) {
    const std::size_t end = std::min(texts.size(), begin + batch);
    pending.push_back(std::async(std::launch::async, [this, &texts, begin, end] {
      std::vector<Result<ParsedSentence>> out;
      nlohmann::json body = {{"texts", nlohmann::json::array()}};
      for (std::size_t i = begin; i < end; ++i) body["texts"].push_back(texts[i]);
      auto resp = client_.post("/parse", body);
      auto fail_all = [&](const Error& e) {
        for (std::size_t i = begin; i < end; ++i) out.emplace_back(e);
        return out;
      };
      if (!resp) return fail_all(resp.error());
      const auto& js = *resp;
      if (!js.is_object() || !js.contains("conllu") || !js["conllu"].is_array() ||
          js["conllu"].size() != end - begin) {
        return fail_all(Error{"invalid-response", "expected \"conllu\" array aligned with texts"});
      }
      for (std::size_t i = 0; i < end - begin; ++i) {
        const auto& item = js["conllu"][i];
        if (!item.is_string()) {
          out.emplace_back(Error{"invalid-response", "conllu entry is not a string"});
          continue;
        }
        auto parsed = parse_conllu_block(item.get<std::string>(), Metadata::Optional);
        if (!parsed) {
          out.emplace_back(Error{"invalid-response", parsed.error().reason});
          continue;
        }
        ParsedSentence s = std::move(parsed).value();
        s.span_ref = {};
        if (s.text.empty()) s.text = texts[begin + i];
        cache_.put(texts[begin + i], s);
        out.emplace_back(std::move(s));
      }
      return out;
    }));
  }
  std::vector<Result<ParsedSentence>> results;
  results.reserve(texts.size());
  for (auto& f : pending) {
    for (auto& r : f.get()) results.push_back(std::move(r));
  }
  return results;
}

Result<ParsedSentence> ServiceAnnotator::annotate(const SentenceSpan& span) {
  return std::move(annotate_batch(std::span<const SentenceSpan>(&span, 1)).front());
}

std::vector<Result<ParsedSentence>> ServiceAnnotator::annotate_batch(std::span<const SentenceSpan> spans) {
  std::vector<std::optional<Result<ParsedSentence>>> slots(spans.size());
  std::vector<std::string> misses;
  std::unordered_map<std::string, std::size_t> miss_index;
  for (std::size_t i = 0; i < spans.size(); ++i) {
    if (auto hit = cache_.get(spans[i].text)) {
      slots[i].emplace(std::move(*hit));
    } else if (miss_index.emplace(spans[i].text, misses.size()).second) {
      misses.push_back(spans[i].text);
    }
  }
  std::vector<Result<ParsedSentence>> fetched;
  if (!misses.empty()) fetched = fetch(misses);

  std::vector<Result<ParsedSentence>> out;
  out.reserve(spans.size());
  for (std::size_t i = 0; i < spans.size(); ++i) {
    Result<ParsedSentence> r = slots[i] ? std::move(*slots[i]) : fetched[miss_index.at(spans[i].text)];
    if (r) r->span_ref = SpanRef{spans[i].doc_id, spans[i].sent_index};
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace genmine
