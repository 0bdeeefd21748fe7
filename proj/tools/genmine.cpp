// genmine: mine bare-plural generics and quantified sentences from JSONL
// corpora, then compute statistics, diversity reports and serve annotation.

#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>

#include "genmine/analysis.hpp"
#include "genmine/annotation.hpp"
#include "genmine/annotator.hpp"
#include "genmine/dataset.hpp"
#include "genmine/embeddings.hpp"
#include "genmine/kernels.hpp"
#include "genmine/pipeline.hpp"
#include "genmine/sampling.hpp"
#include "genmine/text_util.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitStage = 2;

// key=value lines -> "--key=value" arguments, skipping keys already given
// on the command line.
std::vector<std::string> config_args(const std::string& path, const std::vector<std::string>& argv) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config " + path);
  std::vector<std::string> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    std::string_view t = genmine::trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string_view::npos) {
      throw std::invalid_argument(path + ":" + std::to_string(n) + ": expected key=value");
    }
    const std::string key(genmine::trim(t.substr(0, eq)));
    const std::string value(genmine::trim(t.substr(eq + 1)));
    const std::string flag = "--" + key;
    bool given = false;
    for (const auto& a : argv) given = given || a == flag || a.rfind(flag + "=", 0) == 0;
    if (!given) out.push_back(flag + "=" + value);
  }
  return out;
}

std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  for (std::size_t i = 0; i < args.size(); ++i) {
    std::string path;
    std::size_t consumed = 0;
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      consumed = 2;
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      consumed = 1;
    } else {
      continue;
    }
    args.erase(args.begin() + static_cast<std::ptrdiff_t>(i),
               args.begin() + static_cast<std::ptrdiff_t>(i + consumed));
    auto extra = config_args(path, args);
    args.insert(args.end(), extra.begin(), extra.end());
    break;
  }
  return args;
}

void write_file(const std::filesystem::path& p, const std::string& s) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << s;
  if (!out) throw std::runtime_error("cannot write " + p.string());
}

// ---------------------------------------------------------------------------

struct MineArgs {
  std::vector<std::string> inputs;
  std::vector<std::string> parses;
  std::string parser_url;
  std::string scorer = "heuristic";
  std::string scorer_url;
  double threshold = 0.8;
  std::size_t scorer_batch = 64;
  std::size_t max_in_flight = 4;
  std::string blocklist, stopwords;
  std::string out;
  bool emit_candidates = false;
  bool inline_context = false;
  std::size_t workers = 1;
  std::uint64_t seed = 0;
  std::size_t max_doc_bytes = 10 * 1024 * 1024;
};

int run_mine(const MineArgs& a) {
  genmine::RunConfig cfg;
  for (const auto& spec : a.inputs) {
    const auto eq = spec.rfind('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size()) {
      throw std::invalid_argument("--input expects PATH=SOURCE, got " + spec);
    }
    cfg.inputs.push_back({spec.substr(0, eq), genmine::SourceTag::parse(spec.substr(eq + 1))});
  }
  cfg.parse_files = a.parses;
  if (!a.parser_url.empty()) cfg.parser_url = a.parser_url;
  if (a.scorer == "service") {
    cfg.scorer.kind = genmine::ScorerConfig::Kind::ExternalService;
    std::string url = a.scorer_url;
    if (const char* env = std::getenv("GENMINE_SCORER_URL"); env != nullptr && *env != '\0') url = env;
    if (!url.empty()) cfg.scorer.endpoint = url;
  }
  cfg.scorer.threshold = a.threshold;
  cfg.scorer.batch_size = a.scorer_batch;
  cfg.scorer.max_in_flight = a.max_in_flight;
  cfg.scorer.blocklist_path = a.blocklist;
  cfg.scorer.stopwords_path = a.stopwords;
  cfg.out_dir = a.out;
  cfg.emit_candidates = a.emit_candidates;
  cfg.inline_context = a.inline_context;
  cfg.workers = a.workers;
  cfg.seed = a.seed;
  cfg.ingest.max_doc_bytes = a.max_doc_bytes;

  const auto s = genmine::mine(cfg);
  std::cerr << "documents " << s.documents << "  sentences " << s.sentences << "  candidates " << s.candidates
            << "  accepted " << s.accepted << "  errors " << [&] {
                 std::size_t n = 0;
                 for (const auto& [k, v] : s.errors) n += v;
                 return n;
               }() << '\n';
  std::cout << genmine::to_text_table(s.counts);
  return kExitOk;
}

// ---------------------------------------------------------------------------

int run_stats(const std::string& run_dir, const std::string& stopwords_path, std::size_t top) {
  const std::filesystem::path dir(run_dir);
  const auto records = genmine::read_records(dir / "records.jsonl");
  const auto stopwords = genmine::load_stopwords(stopwords_path);
  genmine::LengthAccumulator lengths;
  genmine::WordCounter words;
  std::map<std::string, std::size_t> by_source;
  for (const auto& r : records) {
    lengths.add(r.sentence);
    words.add(r.sentence, stopwords);
    ++by_source[r.source.name()];
  }
  const auto ls = lengths.stats();
  const auto common = words.top(top);

  nlohmann::json j;
  j["records"] = records.size();
  j["lengths"] = genmine::to_json(ls);
  j["sources"] = by_source;
  j["common_words"] = nlohmann::json::array();
  for (const auto& [w, c] : common) j["common_words"].push_back({w, c});
  write_file(dir / "stats.json", j.dump(2) + "\n");
  write_file(dir / "length_hist.csv", genmine::length_plot_csv(ls));

  std::cout << "records " << records.size() << '\n';
  if (ls.n > 0) {
    std::cout << "length  mean " << *ls.mean << "  std " << *ls.stddev << "  median " << *ls.median << '\n';
  }
  for (const auto& [src, n] : by_source) std::cout << "source  " << src << ' ' << n << '\n';
  for (const auto& [w, c] : common) std::cout << w << '\t' << c << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct DiversityArgs {
  std::string run_dir;
  std::string embeddings;
  std::vector<std::string> parses;
  genmine::DiversitySampling sampling;
  std::size_t threads = 1;
};

int run_diversity(const DiversityArgs& a) {
  const std::filesystem::path dir(a.run_dir);
  const auto records = genmine::read_records(dir / "records.jsonl");
  genmine::DiversityReport report;
  report.sampling = a.sampling;

  // Independent per-group seeds from the run seed.
  std::mt19937_64 seeder(a.sampling.seed);

  if (!a.embeddings.empty()) {
    std::vector<genmine::RecordError> errors;
    const auto table = genmine::read_embeddings(a.embeddings, &errors);
    std::vector<const std::vector<float>*> usable;
    for (const auto& r : records) {
      auto it = table.vectors.find(r.record_id);
      if (it != table.vectors.end()) usable.push_back(&it->second);
    }
    if (usable.size() < 2) throw std::runtime_error("fewer than 2 records have embeddings");
    std::vector<std::vector<genmine::EmbeddingView>> groups(a.sampling.cossim_samples);
    for (auto& g : groups) {
      for (std::size_t i : genmine::sample_indices(usable.size(), a.sampling.cossim_sample_size, seeder())) {
        g.emplace_back(*usable[i]);
      }
    }
    report.cossim = genmine::diversity_cossim(groups, a.threads);
    if (!errors.empty()) std::cerr << errors.size() << " embedding lines skipped\n";
  }

  {
    std::vector<std::string> sentences;
    for (std::size_t i : genmine::sample_indices(records.size(), records.size(), seeder())) {
      sentences.push_back(records[i].sentence);
    }
    report.distinct = genmine::distinct_n(sentences, genmine::default_tokenizer(), {1, 2, 3},
                                          a.sampling.distinct_token_budget);
  }

  if (!a.parses.empty()) {
    genmine::ParseStore store;
    for (const auto& p : a.parses) store.load_file(p);
    std::vector<genmine::ParsedSentence> parsed;
    for (std::size_t i : genmine::sample_indices(records.size(), records.size(), seeder())) {
      const auto& r = records[i];
      genmine::SentenceSpan span{r.doc_id, r.sent_index, r.char_start, r.char_end, r.sentence};
      if (auto p = store.annotate(span)) parsed.push_back(std::move(*p));
    }
    report.head_lemmas = genmine::head_lemmas(parsed, a.sampling.lemma_sentence_budget);
  }

  write_file(dir / "diversity.json", genmine::to_json(report).dump(2) + "\n");
  std::cout << genmine::to_text(report);
  return kExitOk;
}

// ---------------------------------------------------------------------------

genmine::AnnotationServer* g_server = nullptr;

void on_signal(int) {
  if (g_server != nullptr) g_server->stop();
}

int run_annotate(const genmine::AnnotationServerConfig& cfg) {
  genmine::AnnotationServer server(cfg);
  const int port = server.bind();
  std::cerr << "serving " << server.batch().size() << " items on http://" << cfg.host << ':' << port << "/\n";
  g_server = &server;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  server.listen();
  g_server = nullptr;
  return kExitOk;
}

int run_sample(const std::string& run_dir, std::size_t n, std::uint64_t seed) {
  const auto records = genmine::read_records(std::filesystem::path(run_dir) / "records.jsonl");
  std::vector<std::string> ids;
  std::map<std::string, const genmine::MGenRecord*> by_id;
  for (const auto& r : records) {
    ids.push_back(r.record_id);
    by_id[r.record_id] = &r;
  }
  for (const auto& id : genmine::sample_batch(ids, n, seed)) {
    std::cout << genmine::to_json(*by_id.at(id)).dump() << '\n';
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mine generic and quantified sentences from text corpora."};
  app.set_version_flag("--version", std::string(GENMINE_VERSION) + " (" +
                                        genmine::kernels::isa_name(genmine::kernels::active().isa) + ")");
  app.require_subcommand(1);
  app.add_option("--config", "key=value file; command-line flags take precedence");

  MineArgs mine;
  auto* m = app.add_subcommand("mine", "run the extraction pipeline");
  m->add_option("--input", mine.inputs, "JSONL corpus as PATH=SOURCE (repeatable)")->required();
  m->add_option("--parses", mine.parses, "CoNLL-U parse files");
  m->add_option("--parser-url", mine.parser_url, "annotation service base URL");
  m->add_option("--scorer", mine.scorer, "heuristic or service")
      ->check(CLI::IsMember({"heuristic", "service"}));
  m->add_option("--scorer-url", mine.scorer_url, "scoring service base URL (GENMINE_SCORER_URL overrides)");
  m->add_option("--threshold", mine.threshold, "minimum accepted score (inclusive)");
  m->add_option("--scorer-batch-size", mine.scorer_batch);
  m->add_option("--max-in-flight", mine.max_in_flight);
  m->add_option("--blocklist", mine.blocklist, "heuristic scorer blocklist file");
  m->add_option("--stopwords", mine.stopwords, "stopword list file");
  m->add_option("--out", mine.out, "run directory")->required();
  m->add_flag("--emit-candidates", mine.emit_candidates, "also write candidates.jsonl");
  m->add_flag("--inline-context", mine.inline_context, "embed the context document in each record");
  m->add_option("--workers", mine.workers)->check(CLI::PositiveNumber);
  m->add_option("--seed", mine.seed);
  m->add_option("--max-doc-bytes", mine.max_doc_bytes);

  std::string stats_run, stats_stopwords;
  std::size_t stats_top = 50;
  auto* st = app.add_subcommand("stats", "length statistics and common words of a run");
  st->add_option("--run", stats_run)->required();
  st->add_option("--stopwords", stats_stopwords);
  st->add_option("--top", stats_top);

  DiversityArgs div;
  auto* dv = app.add_subcommand("diversity", "diversity report of a run");
  dv->add_option("--run", div.run_dir)->required();
  dv->add_option("--embeddings", div.embeddings, "JSONL {id, vec} file");
  dv->add_option("--parses", div.parses, "CoNLL-U files for head-lemma counts");
  dv->add_option("--samples", div.sampling.cossim_samples);
  dv->add_option("--sample-size", div.sampling.cossim_sample_size);
  dv->add_option("--token-budget", div.sampling.distinct_token_budget, "0 = all");
  dv->add_option("--lemma-budget", div.sampling.lemma_sentence_budget, "0 = all");
  dv->add_option("--seed", div.sampling.seed);
  dv->add_option("--threads", div.threads);

  genmine::AnnotationServerConfig ann;
  ann.seed = 17;
  std::string ann_run, ann_ui;
  auto* an = app.add_subcommand("annotate-serve", "serve a labeling batch over HTTP");
  an->add_option("--run", ann_run)->required();
  an->add_option("--n", ann.n);
  an->add_option("--seed", ann.seed);
  an->add_option("--port", ann.port);
  an->add_option("--host", ann.host);
  an->add_option("--ui-dir", ann_ui, "static UI directory");

  std::string sample_run;
  std::size_t sample_n = 300;
  std::uint64_t sample_seed = 17;
  auto* sa = app.add_subcommand("sample", "print a seeded sample of records");
  sa->add_option("--run", sample_run)->required();
  sa->add_option("--n", sample_n);
  sa->add_option("--seed", sample_seed);

  try {
    auto args = expand_config(argc, argv);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "config: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    if (*m) return run_mine(mine);
    if (*st) return run_stats(stats_run, stats_stopwords, stats_top);
    if (*dv) return run_diversity(div);
    if (*an) {
      ann.run_dir = ann_run;
      ann.ui_dir = ann_ui;
      return run_annotate(ann);
    }
    if (*sa) return run_sample(sample_run, sample_n, sample_seed);
  } catch (const genmine::StageError& e) {
    std::cerr << "stage " << e.stage() << " failed: " << e.what() << '\n';
    return kExitStage;
  } catch (const genmine::InvariantViolation& e) {
    std::cerr << "stage emit failed: " << e.what() << '\n';
    return kExitStage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitOk;
}
