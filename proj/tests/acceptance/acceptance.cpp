// Acceptance runner: one PASS/FAIL line per criterion. Tolerances are fixed
// here. Exit status is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>

#include <httplib.h>

#include "genmine/analysis.hpp"
#include "genmine/annotation.hpp"
#include "genmine/dataset.hpp"
#include "genmine/kernels.hpp"
#include "genmine/pipeline.hpp"
#include "test_support.hpp"

using namespace genmine;
using namespace testsupport;

namespace {

constexpr double kCosTightTol = 1e-9;
constexpr double kCosExampleTol = 1e-3;
constexpr double kSyntaxSeconds = 1.0;
constexpr std::size_t kMinTreebank = 60;
constexpr double kMinSentencesPerSecond = 20000.0;
constexpr double kAgreementTol = 1e-9;

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int g_failed = 0;

void report(const std::string& name, const std::function<Outcome()>& fn) {
  Outcome o;
  try {
    o = fn();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  if (!o.pass) ++g_failed;
  std::cout << (o.pass ? "PASS " : "FAIL ") << name << "  " << o.detail << std::endl;
}

const TreebankEntry* find(const std::vector<TreebankEntry>& bank, const std::string& key) {
  for (const auto& e : bank) {
    if (e.get("key") == key) return &e;
  }
  throw std::runtime_error("treebank entry missing: " + key);
}

std::string verdict(const BarePluralCheck& c) { return c.passed ? "pass" : std::string(fail_reason_name(*c.fail_reason)); }

RunConfig fixture_run(const std::filesystem::path& out, std::size_t workers) {
  RunConfig cfg;
  cfg.inputs = {{fixture("corpus_web.jsonl"), SourceTag::parse("refinedweb")},
                {fixture("corpus_pile.jsonl"), SourceTag::parse("pile")},
                {fixture("corpus_s2.jsonl"), SourceTag::parse("pes2o")}};
  cfg.parse_files = {fixture("corpus.conllu")};
  cfg.out_dir = out;
  cfg.emit_candidates = true;
  cfg.workers = workers;
  return cfg;
}

double cos_of(const std::vector<std::vector<float>>& g) {
  std::vector<EmbeddingView> v(g.begin(), g.end());
  return diversity_from_similarity(v).value.value();
}

}  // namespace

int main() {
  const auto bank = load_treebank();
  std::cout << "kernels: " << kernels::isa_name(kernels::active().isa) << "\n";

  report("syntactic-filter", [&] {
    if (bank.size() < kMinTreebank) return Outcome{false, "treebank too small"};
    const auto t0 = Clock::now();
    std::size_t agree = 0;
    for (const auto& e : bank) {
      const auto got = verdict(is_bare_plural(e.parsed));
      if (got == oracle_bare_plural(e.parsed).verdict && got == e.get("expect_syntax")) ++agree;
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    return Outcome{agree == bank.size() && secs < kSyntaxSeconds,
                   std::to_string(agree) + "/" + std::to_string(bank.size()) + " agree in " + std::to_string(secs) + " s"};
  });

  report("quantifier-handling", [&] {
    const auto all = evaluate_sentence(find(bank, "all-tigers-bare")->parsed);
    const auto normally = evaluate_sentence(find(bank, "normally-striped")->parsed);
    const auto embedded = evaluate_sentence(find(bank, "relcl-usually")->parsed);
    HeuristicScorer h;
    const bool ok = all.stage == SentenceStage::Candidate && all.label.name() == "all" &&
                    all.scored_text == "tigers have stripes" && h.score_one(all.scored_text) >= 0.8 &&
                    normally.label.name() == "normally" && embedded.stage == SentenceStage::Candidate &&
                    embedded.label.is_generic();
    return Outcome{ok, "all->'" + all.scored_text + "', normally->" + normally.label.name() + ", embedded->" +
                           embedded.label.name()};
  });

  TempDir run1, run8;
  const auto s1 = mine(fixture_run(run1.path(), 1));

  report("score-threshold", [&] {
    ScorerConfig cfg;
    bool ok = cfg.threshold == 0.8 && accept(GenericityScore{0.8, ""}, cfg) && !accept(GenericityScore{0.79, ""}, cfg);
    std::size_t n = 0;
    for (const auto& r : read_records(run1 / "records.jsonl")) {
      ok = ok && r.score.value >= cfg.threshold;
      ++n;
    }
    return Outcome{ok, "0.8 kept, 0.79 dropped, " + std::to_string(n) + " records >= 0.8"};
  });

  report("determinism", [&] {
    mine(fixture_run(run8.path(), 8));
    bool same = true;
    for (const auto& f : {"records.jsonl", "candidates.jsonl", "counts.json"}) {
      same = same && read_file(run1 / f) == read_file(run8 / f);
    }
    bool bounded = s1.counts.generalizations_total <= s1.counts.candidates_total;
    for (const auto& [label, c] : s1.counts.candidates) bounded = bounded && s1.counts.generalizations.at(label) <= c;
    return Outcome{same && bounded, std::string("1 vs 8 workers ") + (same ? "identical" : "differ") +
                                        ", generalizations <= candidates " + (bounded ? "holds" : "violated")};
  });

  report("cosine-diversity", [&] {
    const double identical = cos_of({{0.6f, 0.8f, 0.0f}, {0.6f, 0.8f, 0.0f}, {0.6f, 0.8f, 0.0f}, {3, 4, 0}});
    const double orthogonal = cos_of({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
    const double mixed = cos_of({{1, 0}, {1, 1}, {0, 1}});
    bool ok = std::abs(identical + 1.0) <= kCosTightTol && std::abs(orthogonal) <= kCosTightTol &&
              std::abs(mixed + 0.4714) <= kCosExampleTol;
    std::mt19937_64 rng(99);
    std::normal_distribution<float> g;
    double worst = 0;
    for (int t = 0; t < 20 && ok; ++t) {
      std::vector<std::vector<float>> grp(30, std::vector<float>(64));
      for (auto& v : grp) {
        for (auto& x : v) x = g(rng);
      }
      const double got = cos_of(grp);
      worst = std::max(worst, std::abs(got - static_cast<double>(oracle_cossim(grp))));
      auto perm = grp;
      std::shuffle(perm.begin(), perm.end(), rng);
      ok = ok && cos_of(perm) == got;
    }
    ok = ok && worst <= kCosTightTol;
    char buf[160];
    std::snprintf(buf, sizeof buf, "identical %.12f, orthogonal %.1e, mixed %.4f, oracle gap %.1e", identical, orthogonal,
                  mixed, worst);
    return Outcome{ok, buf};
  });

  report("distinct-ngrams", [&] {
    const auto tok = default_tokenizer();
    const std::vector<std::string> ab = {"a b", "b a"};
    const auto r = distinct_n(ab, tok, {1, 2}, 0);
    bool ok = r.distinct.at(1) == 2 && r.distinct.at(2) == 2;
    std::mt19937_64 rng(8);
    const char* vocab[] = {"x", "y", "z", "w"};
    for (int t = 0; t < 50 && ok; ++t) {
      std::vector<std::string> s;
      std::vector<std::vector<std::string>> toks;
      for (int i = 0; i < 6; ++i) {
        std::string line;
        std::vector<std::string> tk;
        for (std::uint64_t k = 0; k < rng() % 7; ++k) {
          tk.push_back(vocab[rng() % 4]);
          line += tk.back() + " ";
        }
        s.push_back(line);
        toks.push_back(tk);
      }
      const auto d = distinct_n(s, tok, {1, 2, 3}, 0);
      for (int n = 1; n <= 3; ++n) ok = ok && d.distinct.at(n) == oracle_distinct(toks, static_cast<std::size_t>(n));
    }
    return Outcome{ok, "a b / b a -> " + std::to_string(r.distinct.at(1)) + " unigrams, " +
                           std::to_string(r.distinct.at(2)) + " bigrams; set oracle agrees"};
  });

  report("head-lemmas", [&] {
    const auto h = extract_head_lemmas(find(bank, "bees")->parsed);
    const bool ok = h.subject == "bee" && h.verb == "feed" && h.object == "flower";
    return Outcome{ok, h.subject.value_or("-") + "," + h.verb.value_or("-") + "," + h.object.value_or("-")};
  });

  report("sentence-length", [&] {
    std::istringstream in(read_file(fixture("length_examples.tsv")));
    std::string line;
    std::vector<std::string> sentences;
    while (std::getline(in, line)) sentences.push_back(line.substr(line.find('\t') + 1));
    const auto s = length_stats(sentences);
    const auto soy = word_count(find(bank, "soybeans")->parsed.text);
    const bool ok = word_count("Words have power.") == 3 && soy == 18 && s.n == 23 && std::abs(*s.mean - 14.0) < 1e-9 &&
                    *s.median == 14;
    return Outcome{ok, "3-word example 3, long example " + std::to_string(soy) + ", table mean " +
                           std::to_string(*s.mean) + " median " + std::to_string(*s.median)};
  });

  report("annotation-agreement", [&] {
    TempDir tmp;
    std::filesystem::create_directories(tmp / "run");
    {
      DocumentStore docs(tmp / "run" / "docs");
      RecordSink sink(tmp / "run" / "records.jsonl", SinkOptions{0.8, false});
      for (int i = 0; i < 300; ++i) {
        MGenRecord r;
        r.doc_id = "d" + std::to_string(i);
        r.record_id = make_record_id(r.doc_id, 0);
        r.sentence = "Owls hunt at night.";
        r.score = {1.0, "heuristic-baseline"};
        r.source = SourceTag::parse("pile");
        r.char_end = r.sentence.size();
        docs.put(Document{r.doc_id, r.source, r.sentence});
        sink.emit(r);
      }
      sink.close();
    }
    AnnotationServerConfig cfg;
    cfg.run_dir = tmp / "run";
    cfg.n = 300;
    cfg.seed = 17;
    auto post_all = [&](httplib::Client& c, const std::vector<std::string>& ids, int start, int end) {
      bool ok = true;
      for (int i = start; i < end; ++i) {
        const auto& id = ids[static_cast<std::size_t>(i)];
        nlohmann::json a = {{"record_id", id}, {"annotator_id", "a1"}, {"label", "Generic"}};
        nlohmann::json b = {{"record_id", id}, {"annotator_id", "a2"}, {"label", i < 246 ? "Generic" : "Particular"}};
        ok = ok && c.Post("/api/label", a.dump(), "application/json")->status == 200;
        ok = ok && c.Post("/api/label", b.dump(), "application/json")->status == 200;
      }
      return ok;
    };
    std::vector<std::string> ids;
    bool ok = true;
    {
      AnnotationServer server(cfg);
      httplib::Client c("127.0.0.1", server.start());
      for (const auto& item : server.batch()) ids.push_back(item.record_id);
      ok = ok && post_all(c, ids, 0, 150);
    }
    // Restart halfway through; the log carries the earlier labels.
    AnnotationServer server(cfg);
    httplib::Client c("127.0.0.1", server.start());
    ok = ok && post_all(c, ids, 150, 300);
    const auto rep = nlohmann::json::parse(c.Get("/api/report")->body);
    const double pa = rep["percent_agreement"].get<double>();
    ok = ok && rep["n_double_labeled"] == 300 && std::abs(pa - 82.0) <= kAgreementTol;
    return Outcome{ok, "246/300 -> " + std::to_string(pa) + "% across a restart"};
  });

  report("throughput", [&] {
    std::vector<const ParsedSentence*> parses;
    for (const auto& e : bank) parses.push_back(&e.parsed);
    const std::size_t target = 400000;
    std::size_t candidates = 0;
    const auto t0 = Clock::now();
    for (std::size_t i = 0; i < target; ++i) {
      const auto ev = evaluate_sentence(*parses[i % parses.size()]);
      candidates += ev.stage == SentenceStage::Candidate ? 1 : 0;
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    const double rate = static_cast<double>(target) / secs;
    char buf[120];
    std::snprintf(buf, sizeof buf, "%.0f sentences/s on one thread (%zu candidates)", rate, candidates);
    return Outcome{rate >= kMinSentencesPerSecond, buf};
  });

  std::cout << (g_failed == 0 ? "all criteria passed" : std::to_string(g_failed) + " criteria failed") << std::endl;
  return g_failed;
}
