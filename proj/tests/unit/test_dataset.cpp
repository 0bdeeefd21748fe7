#include <doctest.h>

#include <random>

#include "genmine/dataset.hpp"
#include "test_support.hpp"

using namespace genmine;
using testsupport::TempDir;

namespace {

MGenRecord make(std::string doc, std::size_t i, double score, GenLabel label = GenLabel::generic()) {
  MGenRecord r;
  r.doc_id = std::move(doc);
  r.sent_index = i;
  r.record_id = make_record_id(r.doc_id, i);
  r.sentence = "Tigers have stripes.";
  r.label = label;
  r.score = {score, "heuristic-baseline"};
  r.source = SourceTag::parse("pile");
  r.char_start = 0;
  r.char_end = r.sentence.size();
  return r;
}

}  // namespace

TEST_CASE("record json round trip") {
  auto r = make("d", 2, 0.9, GenLabel::quantified(Quantifier::Usually, QuantPosition::PostVerbal));
  r.context = "Tigers have stripes. More text.";
  const auto j = to_json(r);
  CHECK(j["record_id"] == "d#2");
  CHECK(j["label"] == "usually");
  CHECK(j["position"] == "post-verbal");
  const auto back = record_from_json(j);
  CHECK(back.label == r.label);
  CHECK(back.context == r.context);
  CHECK(back.score.value == 0.9);
  CHECK(to_json(back) == j);
  CHECK_FALSE(to_json(make("d", 0, 1.0)).contains("position"));
  CHECK_THROWS_AS(record_from_json(nlohmann::json{{"record_id", "x"}}), std::invalid_argument);
  auto bad = j;
  bad["label"] = "several";
  CHECK_THROWS_AS(record_from_json(bad), std::invalid_argument);
}

TEST_CASE("sort by document then sentence index") {
  std::vector<MGenRecord> v = {make("b", 0, 1), make("a", 10, 1), make("a", 2, 1), make("a#", 0, 1)};
  sort_records(v);
  CHECK(v[0].record_id == "a#2");
  CHECK(v[1].record_id == "a#10");
  CHECK(v[2].doc_id == "a#");
  CHECK(v[3].doc_id == "b");
}

TEST_CASE("accepted sink refuses records under the threshold") {
  TempDir tmp;
  RecordSink sink(tmp / "r.jsonl", SinkOptions{0.8, false});
  sink.emit(make("d", 0, 0.8));
  sink.emit(make("d", 1, 1.3));
  CHECK_THROWS_AS(sink.emit(make("d", 2, 0.79)), InvariantViolation);
  auto empty_span = make("d", 3, 1.0);
  empty_span.char_end = empty_span.char_start;
  CHECK_THROWS_AS(sink.emit(empty_span), InvariantViolation);
  sink.close();
  CHECK(sink.written() == 2);
  const auto back = read_records(tmp / "r.jsonl");
  REQUIRE(back.size() == 2);
  for (const auto& r : back) CHECK(r.score.value >= 0.8);
}

TEST_CASE("every record a sink accepts meets its threshold") {
  TempDir tmp;
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.5);
  for (double threshold : {0.0, 0.5, 0.8, 1.0}) {
    RecordSink sink(tmp / "p.jsonl", SinkOptions{threshold, false});
    std::size_t accepted = 0;
    for (std::size_t i = 0; i < 200; ++i) {
      const auto r = make("d", i, u(rng));
      if (accept(r.score.value, threshold)) {
        sink.emit(r);
        ++accepted;
      } else {
        CHECK_THROWS_AS(sink.emit(r), InvariantViolation);
      }
    }
    sink.close();
    const auto back = read_records(tmp / "p.jsonl");
    CHECK(back.size() == accepted);
    for (const auto& r : back) CHECK(r.score.value >= threshold);
  }
}

TEST_CASE("inline context") {
  TempDir tmp;
  const std::string ctx = "Tigers have stripes. And more.";
  {
    RecordSink sink(tmp / "i.jsonl", SinkOptions{std::nullopt, true});
    sink.emit(make("d", 0, 0.1), &ctx);
    CHECK_THROWS_AS(sink.emit(make("d", 1, 0.1)), InvariantViolation);
    sink.close();
  }
  CHECK(read_records(tmp / "i.jsonl").at(0).context == ctx);
  {
    RecordSink sink(tmp / "n.jsonl", SinkOptions{});
    sink.emit(make("d", 0, 0.1), &ctx);
    sink.close();
  }
  CHECK_FALSE(read_records(tmp / "n.jsonl").at(0).context);
}

TEST_CASE("unwritable sink throws") {
  CHECK_THROWS_AS(RecordSink("/nonexistent/dir/x.jsonl", SinkOptions{}), std::runtime_error);
}

TEST_CASE("tally") {
  const std::vector<TallyItem> items = {
      {GenLabel::generic(), true},
      {GenLabel::generic(), false},
      {GenLabel::generic(), true},
      {GenLabel::quantified(Quantifier::Most, QuantPosition::Initial), true},
      {GenLabel::quantified(Quantifier::Usually, QuantPosition::PreVerbal), false},
      {GenLabel::quantified(Quantifier::Usually, QuantPosition::PostVerbal), true},
  };
  const auto t = tally(items);
  CHECK(t.candidates.at("GEN") == 3);
  CHECK(t.generalizations.at("GEN") == 2);
  CHECK(t.candidates.at("most") == 1);
  CHECK(t.candidates.at("usually") == 2);
  CHECK(t.generalizations.at("usually") == 1);
  CHECK(t.candidates.at("few") == 0);
  CHECK(t.candidates_total == 6);
  CHECK(t.generalizations_total == 4);
  CHECK(t.candidates.size() == 12);
  for (const auto& [k, v] : t.candidates) CHECK(t.generalizations.at(k) <= v);

  // Merging partial tallies gives the same table.
  TallyAccumulator a, b;
  for (std::size_t i = 0; i < items.size(); ++i) (i % 2 ? a : b).add(items[i].label, items[i].accepted);
  a.merge(b);
  CHECK(a.table() == t);

  const auto j = to_json(t);
  CHECK(j["rows"].size() == 12);
  CHECK(j["rows"][0]["label"] == "GEN");
  CHECK(j["rows"][1]["label"] == "all");
  const auto text = to_text_table(t);
  CHECK(text.find("TOTAL") != std::string::npos);
  CHECK(label_rows().back() == "normally");
}

TEST_CASE("document store") {
  TempDir tmp;
  DocumentStore store(tmp / "docs");
  store.put(Document{"a/b:c", SourceTag::parse("pile"), "Body one."});
  store.put(Document{".hidden", SourceTag::parse("pile"), "Body two."});
  CHECK(store.get("a/b:c") == "Body one.");
  CHECK(store.get(".hidden") == "Body two.");
  CHECK_FALSE(store.get("missing"));
  CHECK(DocumentStore::escape_id("a/b") != DocumentStore::escape_id("a_b"));
  CHECK(store.path_for("a/b:c").parent_path() == tmp / "docs");
}
