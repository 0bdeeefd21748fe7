#include "genmine/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <memory>
#include <mutex>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "genmine/annotator.hpp"
#include "genmine/hashing.hpp"
#include "genmine/sampling.hpp"
#include "genmine/segmenter.hpp"

namespace genmine {

std::string_view stage_name(SentenceStage s) {
  switch (s) {
    case SentenceStage::Prefiltered: return "prefiltered";
    case SentenceStage::QuantifierNotLeaf: return "quantifier-not-leaf";
    case SentenceStage::StripFailed: return "strip-failed";
    case SentenceStage::SyntaxFailed: return "syntax-failed";
    case SentenceStage::Candidate: return "candidate";
  }
  return "?";
}

SentenceEvaluation evaluate_sentence(const ParsedSentence& parsed) {
  SentenceEvaluation ev;
  ev.pre = prefilter(parsed.tokens);
  if (std::holds_alternative<Reject>(ev.pre)) return ev;

  const auto* initial = std::get_if<QuantifierInitial>(&ev.pre);
  std::optional<ParsedSentence> reduced;
  if (initial != nullptr) {
    reduced = drop_first_token(parsed);
    if (!reduced) {
      ev.stage = SentenceStage::QuantifierNotLeaf;
      return ev;
    }
  }
  const ParsedSentence& target = reduced ? *reduced : parsed;
  ev.check = is_bare_plural(target);
  if (!ev.check.passed) {
    ev.stage = SentenceStage::SyntaxFailed;
    return ev;
  }
  ev.label = detect_label(target, ev.pre, ev.check);
  if (initial != nullptr) {
    try {
      ev.scored_text = strip_quantifier(parsed.text, initial->quantifier);
    } catch (const std::invalid_argument&) {
      ev.stage = SentenceStage::StripFailed;
      return ev;
    }
  } else {
    ev.scored_text = parsed.text;
  }
  ev.stage = SentenceStage::Candidate;
  return ev;
}

// ---------------------------------------------------------------------------
// Config

void RunConfig::validate() const {
  if (inputs.empty()) throw std::invalid_argument("no inputs");
  const bool files = !parse_files.empty();
  const bool service = parser_url.has_value() && !parser_url->empty();
  if (files == service) throw std::invalid_argument("exactly one parse source is required (--parses or --parser-url)");
  if (workers == 0) throw std::invalid_argument("workers must be >= 1");
  if (out_dir.empty()) throw std::invalid_argument("no output directory");
  if (chunk_documents == 0) throw std::invalid_argument("chunk size must be positive");
  scorer.validate();
}

nlohmann::json to_json(const RunConfig& cfg) {
  nlohmann::json inputs = nlohmann::json::array();
  for (const auto& in : cfg.inputs) inputs.push_back({{"path", in.path}, {"source", in.source.name()}});
  nlohmann::json scorer = {
      {"kind", cfg.scorer.kind == ScorerConfig::Kind::ExternalService ? "external-service" : "heuristic-baseline"},
      {"endpoint", cfg.scorer.endpoint ? nlohmann::json(*cfg.scorer.endpoint) : nlohmann::json(nullptr)},
      {"threshold", cfg.scorer.threshold},
      {"batch_size", cfg.scorer.batch_size},
      {"max_in_flight", cfg.scorer.max_in_flight},
      {"blocklist", cfg.scorer.blocklist_path},
      {"stopwords", cfg.scorer.stopwords_path}};
  return {{"inputs", inputs},
          {"parse_files", cfg.parse_files},
          {"parser_url", cfg.parser_url ? nlohmann::json(*cfg.parser_url) : nlohmann::json(nullptr)},
          {"parser_batch_size", cfg.parser_batch_size},
          {"scorer", scorer},
          {"out_dir", cfg.out_dir.string()},
          {"emit_candidates", cfg.emit_candidates},
          {"inline_context", cfg.inline_context},
          {"workers", cfg.workers},
          {"seed", cfg.seed},
          {"max_doc_bytes", cfg.ingest.max_doc_bytes},
          {"chunk_documents", cfg.chunk_documents}};
}

nlohmann::json to_json(const RunSummary& s) {
  return {{"documents", s.documents},
          {"sentences", s.sentences},
          {"annotated", s.annotated},
          {"candidates", s.candidates},
          {"accepted", s.accepted},
          {"round_trip_checked", s.round_trip_checked},
          {"funnel", s.funnel},
          {"errors", s.errors},
          {"counts", to_json(s.counts)},
          {"lengths", to_json(s.lengths)}};
}

// ---------------------------------------------------------------------------
// Run

namespace {

struct Pending {
  MGenRecord record;
  std::string scored_text;
};

struct DocResult {
  std::vector<Pending> candidates;
  std::vector<RecordError> errors;
  std::map<std::string, std::size_t> funnel;
  std::size_t sentences = 0;
  std::size_t annotated = 0;
};

DocResult process_document(const Document& doc, const Segmenter& segmenter, Annotator& annotator,
                           bool inline_context) {
  DocResult out;
  const auto spans = segmenter.segment(doc);
  out.sentences = spans.size();
  auto parses = annotator.annotate_batch(spans);
  for (std::size_t i = 0; i < spans.size(); ++i) {
    const SentenceSpan& span = spans[i];
    if (!parses[i].ok()) {
      out.errors.push_back({"annotate", doc.doc_id, span.sent_index, parses[i].error().reason,
                            parses[i].error().detail});
      continue;
    }
    ++out.annotated;
    ParsedSentence& parsed = *parses[i];
    parsed.span_ref = {span.doc_id, span.sent_index};
    parsed.text = span.text;
    SentenceEvaluation ev = evaluate_sentence(parsed);
    ++out.funnel[std::string(stage_name(ev.stage))];
    if (ev.stage != SentenceStage::Candidate) continue;

    Pending p;
    p.scored_text = std::move(ev.scored_text);
    MGenRecord& r = p.record;
    r.record_id = make_record_id(doc.doc_id, span.sent_index);
    r.sentence = span.text;
    r.label = ev.label;
    r.source = doc.source;
    r.doc_id = doc.doc_id;
    r.sent_index = span.sent_index;
    r.char_start = span.char_start;
    r.char_end = span.char_end;
    if (inline_context) r.context = doc.text;
    out.candidates.push_back(std::move(p));
  }
  return out;
}

template <typename F>
void parallel_for(std::size_t n, std::size_t workers, F&& f) {
  workers = std::max<std::size_t>(1, std::min(workers, n));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex failure_mu;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      try {
        for (std::size_t i = next++; i < n; i = next++) f(i);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next = n;
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

nlohmann::json to_json(const RecordError& e) {
  return {{"stage", e.stage}, {"file", e.file}, {"line", e.line}, {"reason", e.reason}, {"detail", e.detail}};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

std::unique_ptr<Annotator> make_annotator(const RunConfig& cfg, std::vector<RecordError>& errors) {
  if (cfg.parser_url) {
    ServiceAnnotatorConfig sc;
    sc.http.base_url = *cfg.parser_url;
    sc.http.retry = cfg.scorer.retry;
    sc.batch_size = cfg.parser_batch_size;
    return std::make_unique<ServiceAnnotator>(std::move(sc));
  }
  auto store = std::make_unique<ParseStore>();
  for (const auto& path : cfg.parse_files) store->load_file(path, &errors);
  return store;
}

}  // namespace

RunSummary mine(const RunConfig& cfg) {
  cfg.validate();
  for (const auto& in : cfg.inputs) {
    if (!std::filesystem::is_regular_file(in.path)) throw std::runtime_error("input not found: " + in.path);
  }
  for (const auto& p : cfg.parse_files) {
    if (!std::filesystem::is_regular_file(p)) throw std::runtime_error("parse file not found: " + p);
  }
  std::filesystem::create_directories(cfg.out_dir);

  std::vector<RecordError> errors;
  auto annotator = make_annotator(cfg, errors);
  auto scorer = make_scorer(cfg.scorer);
  RuleSegmenter segmenter;
  std::unique_ptr<DocumentStore> store;
  if (!cfg.inline_context) store = std::make_unique<DocumentStore>(cfg.out_dir / "docs");

  RunSummary summary;
  TallyAccumulator tally;
  LengthAccumulator lengths;
  std::vector<MGenRecord> accepted;
  std::vector<MGenRecord> candidates;
  std::size_t score_failed = 0;
  std::unordered_set<std::string> seen_ids;

  std::vector<Document> chunk;
  auto flush_chunk = [&] {
    if (chunk.empty()) return;
    std::vector<DocResult> results(chunk.size());
    parallel_for(chunk.size(), cfg.workers, [&](std::size_t i) {
      results[i] = process_document(chunk[i], segmenter, *annotator, cfg.inline_context);
    });

    std::vector<Pending> pending;
    for (std::size_t i = 0; i < chunk.size(); ++i) {
      DocResult& r = results[i];
      summary.sentences += r.sentences;
      summary.annotated += r.annotated;
      for (const auto& [stage, n] : r.funnel) summary.funnel[stage] += n;
      errors.insert(errors.end(), r.errors.begin(), r.errors.end());
      if (!r.candidates.empty() && store) store->put(chunk[i]);
      for (auto& p : r.candidates) pending.push_back(std::move(p));
    }

    std::vector<std::string> texts;
    texts.reserve(pending.size());
    for (const auto& p : pending) texts.push_back(p.scored_text);
    ScoreResult scores = scorer->score(texts);
    for (std::size_t i = 0; i < pending.size(); ++i) {
      MGenRecord& rec = pending[i].record;
      if (!scores.scores[i]) {
        ++score_failed;
        std::string reason = "score-failed";
        for (const auto& be : scores.errors) {
          if (i >= be.first && i < be.last) reason = be.error.reason;
        }
        errors.push_back({"score", rec.doc_id, rec.sent_index, reason, rec.record_id});
        continue;
      }
      rec.score = *scores.scores[i];
      const bool ok = accept(rec.score, cfg.scorer);
      tally.add(rec.label, ok);
      ++summary.candidates;
      if (ok) {
        ++summary.accepted;
        lengths.add(rec.sentence);
        accepted.push_back(rec);
      }
      if (cfg.emit_candidates) candidates.push_back(std::move(rec));
    }
    chunk.clear();
  };

  for (const auto& in : cfg.inputs) {
    DocumentReader reader(in.path, in.source, cfg.ingest, &seen_ids);
    while (auto doc = reader.next()) {
      ++summary.documents;
      chunk.push_back(std::move(*doc));
      if (chunk.size() >= cfg.chunk_documents) flush_chunk();
    }
    flush_chunk();
    errors.insert(errors.end(), reader.errors().begin(), reader.errors().end());
  }

  if (summary.sentences > 0 && summary.annotated == 0) {
    throw StageError("annotate", "no sentence could be annotated (" + std::to_string(errors.size()) + " errors)");
  }
  if (score_failed > 0 && summary.candidates == 0) {
    throw StageError("score", "every candidate failed to score");
  }
  if (score_failed > 0) summary.funnel["score-failed"] = score_failed;

  sort_records(accepted);
  sort_records(candidates);
  {
    SinkOptions opts;
    opts.min_score = cfg.scorer.threshold;
    opts.inline_context = cfg.inline_context;
    RecordSink sink(cfg.out_dir / "records.jsonl", opts);
    for (const auto& r : accepted) sink.emit(r);
    sink.close();
  }
  if (cfg.emit_candidates) {
    SinkOptions opts;
    opts.inline_context = cfg.inline_context;
    RecordSink sink(cfg.out_dir / "candidates.jsonl", opts);
    for (const auto& r : candidates) sink.emit(r);
    sink.close();
  }

  // Read back a 1% sample and check each sentence against its context span.
  {
    const auto written = read_records(cfg.out_dir / "records.jsonl");
    const std::size_t k = (written.size() + 99) / 100;
    for (std::size_t i : sample_indices(written.size(), k, cfg.seed)) {
      const MGenRecord& r = written[i];
      std::optional<std::string> ctx = r.context;
      if (!ctx && store) ctx = store->get(r.doc_id);
      if (!ctx || r.char_end > ctx->size() ||
          ctx->compare(r.char_start, r.char_end - r.char_start, r.sentence) != 0) {
        throw StageError("verify", "record " + r.record_id + " does not match its context span");
      }
      ++summary.round_trip_checked;
    }
  }

  summary.counts = tally.table();
  summary.lengths = lengths.stats();
  for (const auto& e : errors) ++summary.errors[e.stage + ":" + e.reason];

  write_text(cfg.out_dir / "counts.json", to_json(summary.counts).dump(2) + "\n");
  write_text(cfg.out_dir / "counts.txt", to_text_table(summary.counts));
  write_text(cfg.out_dir / "length_stats.json", to_json(summary.lengths).dump(2) + "\n");
  write_text(cfg.out_dir / "length_hist.csv", length_plot_csv(summary.lengths));
  {
    std::string lines;
    for (const auto& e : errors) lines += to_json(e).dump() + "\n";
    write_text(cfg.out_dir / "errors.jsonl", lines);
  }

  nlohmann::json manifest;
  manifest["version"] = GENMINE_VERSION;
  manifest["config"] = to_json(cfg);
  manifest["scorer_id"] = scorer->id();
  nlohmann::json digests = nlohmann::json::array();
  for (const auto& in : cfg.inputs) {
    digests.push_back({{"path", in.path}, {"source", in.source.name()}, {"sha256", sha256_file_hex(in.path)}});
  }
  manifest["inputs"] = digests;
  nlohmann::json parse_digests = nlohmann::json::array();
  for (const auto& p : cfg.parse_files) parse_digests.push_back({{"path", p}, {"sha256", sha256_file_hex(p)}});
  manifest["parse_files"] = parse_digests;
  for (const auto& [key, path] : {std::pair{"blocklist", cfg.scorer.blocklist_path},
                                  std::pair{"stopwords", cfg.scorer.stopwords_path}}) {
    manifest["word_lists"][key] = path.empty() ? nlohmann::json("builtin") : nlohmann::json(sha256_file_hex(path));
  }
  manifest["summary"] = to_json(summary);
  write_text(cfg.out_dir / "manifest.json", manifest.dump(2) + "\n");
  return summary;
}

}  // namespace genmine
