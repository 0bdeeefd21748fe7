#include "genmine/scoring.hpp"

#include <cmath>
#include <future>
#include <stdexcept>
#include <utility>

#include "genmine/default_lists.hpp"

namespace genmine {

void ScorerConfig::validate() const {
  const bool has_endpoint = endpoint.has_value() && !endpoint->empty();
  if ((kind == Kind::ExternalService) != has_endpoint) {
    throw std::invalid_argument("scorer endpoint must be set iff the scorer is an external service");
  }
  if (!(threshold > 0.0) || !std::isfinite(threshold)) throw std::invalid_argument("threshold must be > 0");
  if (batch_size == 0) throw std::invalid_argument("batch size must be positive");
}

std::string strip_quantifier(std::string_view text, Quantifier q) {
  const std::string_view word = QuantifierInventory::name(q);
  std::size_t i = 0;
  while (i < text.size() && is_space(text[i])) ++i;
  std::size_t j = i + word.size();
  if (j > text.size() || lowercase(text.substr(i, word.size())) != word) j = std::string_view::npos;
  while (j < text.size() && is_punct(text[j])) ++j;  // "Generally, ..."
  if (j >= text.size() || !is_space(text[j])) {
    throw std::invalid_argument("text does not start with quantifier \"" + std::string(word) + "\"");
  }
  i = j;
  while (i < text.size() && is_space(text[i])) ++i;
  return std::string(text.substr(i));
}

// ---------------------------------------------------------------------------
// Blocklist

namespace {

bool is_symbol_entry(std::string_view e) {
  for (char c : e) {
    if (is_alnum(c) || is_space(c)) return false;
  }
  return !e.empty();
}

bool is_year(std::string_view w) {
  if (w.size() != 4) return false;
  for (char c : w) {
    if (!is_digit(c)) return false;
  }
  const int y = (w[0] - '0') * 1000 + (w[1] - '0') * 100 + (w[2] - '0') * 10 + (w[3] - '0');
  return y >= 1000 && y <= 2099;
}

}  // namespace

Blocklist Blocklist::parse(std::string_view text) {
  Blocklist b;
  for (std::string& entry : parse_word_list(text)) {
    if (entry == "<year>") {
      b.years_ = true;
    } else if (is_symbol_entry(entry)) {
      b.symbols_.push_back(std::move(entry));
    } else {
      std::vector<std::string> words;
      for (std::string_view w : split_whitespace(entry)) words.emplace_back(w);
      if (!words.empty()) b.phrases_.push_back(std::move(words));
    }
  }
  return b;
}

Blocklist Blocklist::from_file(const std::string& path) {
  std::vector<std::string> lines = read_word_list(path);
  std::string joined;
  for (const auto& l : lines) joined += l + "\n";
  return parse(joined);
}

const Blocklist& Blocklist::builtin() {
  static const Blocklist kList = parse(default_blocklist_text());
  return kList;
}

std::optional<std::string> Blocklist::first_hit(std::string_view sentence) const {
  for (const auto& sym : symbols_) {
    if (sentence.find(sym) != std::string_view::npos) return sym;
  }
  const std::vector<std::string> words = normalized_words(sentence);
  for (const auto& phrase : phrases_) {
    if (phrase.size() > words.size()) continue;
    for (std::size_t i = 0; i + phrase.size() <= words.size(); ++i) {
      bool match = true;
      for (std::size_t k = 0; k < phrase.size() && match; ++k) match = words[i + k] == phrase[k];
      if (match) {
        std::string hit = phrase.front();
        for (std::size_t k = 1; k < phrase.size(); ++k) hit += " " + phrase[k];
        return hit;
      }
    }
  }
  if (years_) {
    for (const auto& w : words) {
      if (is_year(w)) return w;
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Heuristic scorer

WordSet builtin_stopwords() {
  auto list = parse_word_list(default_stopwords_text());
  return WordSet(list.begin(), list.end());
}

WordSet load_stopwords(const std::string& path) {
  if (path.empty()) return builtin_stopwords();
  auto list = read_word_list(path);
  return WordSet(list.begin(), list.end());
}

HeuristicScorer::HeuristicScorer() : HeuristicScorer(Blocklist::builtin(), builtin_stopwords()) {}

HeuristicScorer::HeuristicScorer(Blocklist blocklist, WordSet stopwords)
    : blocklist_(std::move(blocklist)), stopwords_(std::move(stopwords)) {}

bool HeuristicScorer::repeated_title(std::string_view text) const {
  constexpr std::size_t kWindow = 8;
  std::vector<std::string> words = normalized_words(text);
  if (words.size() > kWindow) words.resize(kWindow);
  auto next_content = [&](std::size_t from) {
    while (from < words.size() && stopwords_.count(words[from]) > 0) ++from;
    return from;
  };
  const std::size_t p1 = next_content(0);
  const std::size_t p2 = next_content(p1 + 1);
  if (p2 >= words.size()) return false;
  for (std::size_t k = p2 + 1; k < words.size(); ++k) {
    if (words[k] != words[p1]) continue;
    const std::size_t m = next_content(k + 1);
    if (m < words.size() && words[m] == words[p2]) return true;
  }
  return false;
}

double HeuristicScorer::score_one(std::string_view text) const {
  double value = 1.0;
  if (blocklist_hit(text)) value -= 0.5;
  if (repeated_title(text)) value -= 0.5;
  return value;
}

ScoreResult HeuristicScorer::score(std::span<const std::string> texts) {
  ScoreResult out;
  out.scores.reserve(texts.size());
  for (const auto& t : texts) out.scores.emplace_back(GenericityScore{score_one(t), id()});
  return out;
}

// ---------------------------------------------------------------------------
// Service scorer

namespace {

HttpClientConfig http_config(const ScorerConfig& cfg) {
  HttpClientConfig http;
  http.base_url = cfg.endpoint.value_or("");
  http.retry = cfg.retry;
  http.max_in_flight = cfg.max_in_flight;
  return http;
}

}  // namespace

ServiceScorer::ServiceScorer(const ScorerConfig& cfg)
    : batch_size_(cfg.batch_size == 0 ? 1 : cfg.batch_size), client_(http_config(cfg)) {}

ScoreResult ServiceScorer::score(std::span<const std::string> texts) {
  struct BatchOutcome {
    std::vector<double> values;
    std::optional<Error> error;
  };
  std::vector<std::future<BatchOutcome>> pending;
  for (std::size_t begin = 0; begin < texts.size(); begin += batch_size_) {
    const std::size_t end = std::min(texts.size(), begin + batch_size_);
    pending.push_back(std::async(std::launch::async, [this, texts, begin, end] {
      BatchOutcome bo;
      nlohmann::json body = {{"texts", nlohmann::json::array()}};
      for (std::size_t i = begin; i < end; ++i) body["texts"].push_back(texts[i]);
      auto resp = client_.post("/score", body);
      if (!resp) {
        bo.error = resp.error();
        return bo;
      }
      const auto& js = *resp;
      if (!js.is_object() || !js.contains("scores") || !js["scores"].is_array() ||
          js["scores"].size() != end - begin) {
        bo.error = Error{"invalid-response", "expected \"scores\" array aligned with texts"};
        return bo;
      }
      for (const auto& v : js["scores"]) {
        if (!v.is_number() || !std::isfinite(v.get<double>())) {
          bo.error = Error{"invalid-response", "non-finite or non-numeric score"};
          bo.values.clear();
          return bo;
        }
        bo.values.push_back(v.get<double>());
      }
      return bo;
    }));
  }

  ScoreResult out;
  out.scores.resize(texts.size());
  const std::string scorer = id();
  for (std::size_t b = 0; b < pending.size(); ++b) {
    const std::size_t begin = b * batch_size_;
    const std::size_t end = std::min(texts.size(), begin + batch_size_);
    BatchOutcome bo = pending[b].get();
    if (bo.error) {
      out.errors.push_back(ScoreBatchError{b, begin, end, *bo.error});
      continue;
    }
    for (std::size_t i = begin; i < end; ++i) out.scores[i] = GenericityScore{bo.values[i - begin], scorer};
  }
  return out;
}

std::unique_ptr<Scorer> make_scorer(const ScorerConfig& cfg) {
  cfg.validate();
  if (cfg.kind == ScorerConfig::Kind::ExternalService) return std::make_unique<ServiceScorer>(cfg);
  Blocklist bl = cfg.blocklist_path.empty() ? Blocklist::builtin() : Blocklist::from_file(cfg.blocklist_path);
  return std::make_unique<HeuristicScorer>(std::move(bl), load_stopwords(cfg.stopwords_path));
}

}  // namespace genmine
