#include "genmine/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "genmine/kernels.hpp"

namespace genmine {

// ---------------------------------------------------------------------------
// Sentence length

std::size_t word_count(std::string_view sentence) { return kernels::count_words(sentence); }

void LengthAccumulator::merge(const LengthAccumulator& other) {
  for (const auto& [len, f] : other.histogram_) histogram_[len] += f;
}

LengthStats LengthAccumulator::stats() const {
  LengthStats s;
  s.histogram = histogram_;
  double sum = 0.0;
  for (const auto& [len, f] : histogram_) {
    s.n += f;
    sum += static_cast<double>(len) * static_cast<double>(f);
  }
  if (s.n == 0) return s;
  const double mean = sum / static_cast<double>(s.n);
  double sq = 0.0;
  for (const auto& [len, f] : histogram_) {
    const double d = static_cast<double>(len) - mean;
    sq += d * d * static_cast<double>(f);
  }
  s.mean = mean;
  s.stddev = std::sqrt(sq / static_cast<double>(s.n));
  const std::size_t target = (s.n - 1) / 2;  // 0-based rank of the lower middle
  std::size_t seen = 0;
  for (const auto& [len, f] : histogram_) {
    seen += f;
    if (seen > target) {
      s.median = len;
      break;
    }
  }
  return s;
}

LengthStats length_stats(std::span<const std::string> sentences) {
  LengthAccumulator acc;
  for (const auto& s : sentences) acc.add(s);
  return acc.stats();
}

nlohmann::json to_json(const LengthStats& s) {
  nlohmann::json hist = nlohmann::json::object();
  for (const auto& [len, f] : s.histogram) hist[std::to_string(len)] = f;
  nlohmann::json j = {{"n", s.n}, {"histogram", hist}};
  j["mean"] = s.mean ? nlohmann::json(*s.mean) : nlohmann::json(nullptr);
  j["std"] = s.stddev ? nlohmann::json(*s.stddev) : nlohmann::json(nullptr);
  j["median"] = s.median ? nlohmann::json(*s.median) : nlohmann::json(nullptr);
  return j;
}

std::string length_plot_csv(const LengthStats& s) {
  std::ostringstream os;
  os << "length,percentage\n";
  os << std::fixed << std::setprecision(6);
  for (const auto& [len, f] : s.histogram) {
    os << len << ',' << 100.0 * static_cast<double>(f) / static_cast<double>(s.n) << '\n';
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Common words

void WordCounter::add(std::string_view sentence, const WordSet& stopwords) {
  for (std::string& w : normalized_words(sentence)) {
    if (stopwords.count(w) > 0) continue;
    ++counts_[std::move(w)];
  }
}

void WordCounter::merge(const WordCounter& other) {
  for (const auto& [w, c] : other.counts_) counts_[w] += c;
}

std::vector<WordCount> WordCounter::top(std::size_t k) const {
  std::vector<WordCount> all(counts_.begin(), counts_.end());
  auto by_rank = [](const WordCount& a, const WordCount& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  };
  if (k < all.size()) {
    std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k), all.end(), by_rank);
    all.resize(k);
  } else {
    std::sort(all.begin(), all.end(), by_rank);
  }
  return all;
}

std::vector<WordCount> common_words(std::span<const std::string> sentences, const WordSet& stopwords,
                                    std::size_t k) {
  WordCounter counter;
  for (const auto& s : sentences) counter.add(s, stopwords);
  return counter.top(k);
}

// ---------------------------------------------------------------------------
// Diversity from cosine similarity

GroupDiversity diversity_from_similarity(std::span<const EmbeddingView> group) {
  GroupDiversity out;
  if (group.empty()) return out;
  const std::size_t dim = group.front().size();
  std::vector<EmbeddingView> usable;
  std::vector<double> norms;
  usable.reserve(group.size());
  norms.reserve(group.size());
  for (const EmbeddingView& v : group) {
    if (v.size() != dim) throw std::invalid_argument("embedding dimensions differ within a group");
    const double sq = kernels::dot(v, v);
    if (!(sq > 0.0)) {
      ++out.dropped_zero;
      continue;
    }
    usable.push_back(v);
    norms.push_back(std::sqrt(sq));
  }
  out.used = usable.size();
  if (usable.size() < 2) return out;

  std::vector<double> sims;
  sims.reserve(usable.size() * (usable.size() - 1) / 2);
  for (std::size_t i = 0; i < usable.size(); ++i) {
    for (std::size_t j = i + 1; j < usable.size(); ++j) {
      sims.push_back(kernels::dot(usable[i], usable[j]) / (norms[i] * norms[j]));
    }
  }
  std::sort(sims.begin(), sims.end());
  double total = 0.0;
  for (double s : sims) total += s;
  out.value = -total / static_cast<double>(sims.size());
  return out;
}

CosSimReport diversity_cossim(std::span<const std::vector<EmbeddingView>> groups, std::size_t threads) {
  std::vector<GroupDiversity> results(groups.size());
  threads = std::max<std::size_t>(1, std::min(threads, groups.size()));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t g = next++; g < groups.size(); g = next++) results[g] = diversity_from_similarity(groups[g]);
  };
  if (threads == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  CosSimReport rep;
  rep.groups = groups.size();
  for (const auto& r : results) {
    rep.dropped_zero += r.dropped_zero;
    if (r.value) {
      rep.per_group.push_back(*r.value);
    } else {
      ++rep.groups_skipped;
    }
  }
  if (rep.per_group.empty()) return rep;
  double sum = 0.0;
  for (double v : rep.per_group) sum += v;
  const double mean = sum / static_cast<double>(rep.per_group.size());
  double sq = 0.0;
  for (double v : rep.per_group) sq += (v - mean) * (v - mean);
  rep.mean = mean;
  rep.stddev = std::sqrt(sq / static_cast<double>(rep.per_group.size()));
  return rep;
}

// ---------------------------------------------------------------------------
// Distinct n-grams

Tokenizer default_tokenizer() {
  return [](std::string_view s) { return normalized_words(s); };
}

DistinctNgramAccumulator::DistinctNgramAccumulator(std::vector<int> n_values) : n_values_(std::move(n_values)) {
  for (int n : n_values_) {
    if (n < 1) throw std::invalid_argument("n-gram order must be >= 1");
    seen_[n];
  }
}

void DistinctNgramAccumulator::add_tokens(const std::vector<std::string>& tokens) {
  for (int n : n_values_) {
    const auto order = static_cast<std::size_t>(n);
    if (tokens.size() < order) continue;
    auto& set = seen_[n];
    for (std::size_t i = 0; i + order <= tokens.size(); ++i) {
      std::string key = tokens[i];
      for (std::size_t k = 1; k < order; ++k) {
        key.push_back('\x1f');
        key += tokens[i + k];
      }
      set.insert(std::move(key));
    }
  }
}

void DistinctNgramAccumulator::merge(const DistinctNgramAccumulator& other) {
  for (const auto& [n, set] : other.seen_) seen_[n].insert(set.begin(), set.end());
}

std::map<int, std::size_t> DistinctNgramAccumulator::counts() const {
  std::map<int, std::size_t> out;
  for (const auto& [n, set] : seen_) out[n] = set.size();
  return out;
}

DistinctReport distinct_n(std::span<const std::string> sentences, const Tokenizer& tokenizer,
                          std::vector<int> n_values, std::size_t budget) {
  DistinctNgramAccumulator acc(std::move(n_values));
  DistinctReport rep;
  for (const auto& s : sentences) {
    if (budget != 0 && rep.tokens >= budget) break;
    auto tokens = tokenizer(s);
    rep.tokens += tokens.size();
    ++rep.sentences;
    acc.add_tokens(tokens);
  }
  rep.distinct = acc.counts();
  return rep;
}

// ---------------------------------------------------------------------------
// Head lemmas

namespace {

bool is_noun(const Token& t) { return t.upos == Upos::NOUN || t.upos == Upos::PROPN; }

int leftmost_child(const ParsedSentence& s, int head, std::initializer_list<std::string_view> rels,
                   bool (*pred)(const Token&)) {
  for (const Token& t : s.tokens) {
    if (t.head != head) continue;
    for (std::string_view r : rels) {
      if (t.deprel == r && (pred == nullptr || pred(t))) return t.index;
    }
  }
  return 0;
}

}  // namespace

HeadLemmas extract_head_lemmas(const ParsedSentence& s) {
  HeadLemmas out;
  const int root = s.root_index();
  if (root == 0) return out;
  if (int subj = leftmost_child(s, root, {"nsubj", "nsubj:pass"}, &is_noun)) {
    out.subject = lowercase(s.at(subj).lemma);
  }
  int verb = leftmost_child(s, root, {"cop", "aux:pass"}, nullptr);
  if (verb == 0 && (s.at(root).upos == Upos::VERB || s.at(root).upos == Upos::AUX)) verb = root;
  if (verb != 0) out.verb = lowercase(s.at(verb).lemma);
  int obj = leftmost_child(s, root, {"obj"}, &is_noun);
  if (obj == 0) obj = leftmost_child(s, root, {"obl"}, &is_noun);
  if (obj != 0) out.object = lowercase(s.at(obj).lemma);
  return out;
}

void HeadLemmaAccumulator::add(const ParsedSentence& s) {
  HeadLemmas h = extract_head_lemmas(s);
  if (h.subject) subject_.insert(std::move(*h.subject));
  if (h.verb) verb_.insert(std::move(*h.verb));
  if (h.object) object_.insert(std::move(*h.object));
  ++sentences_;
}

void HeadLemmaAccumulator::merge(const HeadLemmaAccumulator& other) {
  subject_.insert(other.subject_.begin(), other.subject_.end());
  verb_.insert(other.verb_.begin(), other.verb_.end());
  object_.insert(other.object_.begin(), other.object_.end());
  sentences_ += other.sentences_;
}

HeadLemmaCounts HeadLemmaAccumulator::counts() const {
  return {subject_.size(), verb_.size(), object_.size(), sentences_};
}

HeadLemmaCounts head_lemmas(std::span<const ParsedSentence> parses, std::size_t budget) {
  HeadLemmaAccumulator acc;
  std::size_t taken = 0;
  for (const auto& p : parses) {
    if (budget != 0 && taken >= budget) break;
    acc.add(p);
    ++taken;
  }
  return acc.counts();
}

// ---------------------------------------------------------------------------
// Report

namespace {
nlohmann::json opt(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); }
}  // namespace

nlohmann::json to_json(const DiversityReport& r) {
  nlohmann::json j;
  j["sampling"] = {{"cossim", {{"samples", r.sampling.cossim_samples}, {"sample_size", r.sampling.cossim_sample_size}}},
                   {"distinct_token_budget", r.sampling.distinct_token_budget},
                   {"lemma_sentence_budget", r.sampling.lemma_sentence_budget},
                   {"seed", r.sampling.seed}};
  if (r.cossim) {
    j["d_cossim"] = {{"mean", opt(r.cossim->mean)},
                     {"std", opt(r.cossim->stddev)},
                     {"groups", r.cossim->groups},
                     {"groups_skipped", r.cossim->groups_skipped},
                     {"dropped_zero_vectors", r.cossim->dropped_zero}};
  }
  if (r.distinct) {
    nlohmann::json d = nlohmann::json::object();
    for (const auto& [n, c] : r.distinct->distinct) d[std::to_string(n)] = c;
    j["distinct"] = {{"counts", d}, {"tokens", r.distinct->tokens}, {"sentences", r.distinct->sentences}};
  }
  if (r.head_lemmas) {
    j["head_lemmas"] = {{"subject", r.head_lemmas->subject},
                        {"verb", r.head_lemmas->verb},
                        {"object", r.head_lemmas->object},
                        {"sentences", r.head_lemmas->sentences}};
  }
  return j;
}

std::string to_text(const DiversityReport& r) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(4);
  if (r.cossim) {
    os << "diversity-from-similarity  ";
    if (r.cossim->mean) {
      os << *r.cossim->mean << " +- " << *r.cossim->stddev;
    } else {
      os << "undefined";
    }
    os << "  (" << r.cossim->per_group.size() << " groups of <= " << r.sampling.cossim_sample_size << ")\n";
  }
  if (r.distinct) {
    for (const auto& [n, c] : r.distinct->distinct) {
      os << "distinct-" << n << std::setw(20) << c << '\n';
    }
    os << "tokens consumed" << std::setw(15) << r.distinct->tokens << '\n';
  }
  if (r.head_lemmas) {
    os << "head lemmas  subject " << r.head_lemmas->subject << "  verb " << r.head_lemmas->verb << "  object "
       << r.head_lemmas->object << "  (" << r.head_lemmas->sentences << " sentences)\n";
  }
  return os.str();
}

}  // namespace genmine
