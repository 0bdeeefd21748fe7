#include <doctest.h>

#include <unordered_set>

#include "genmine/corpus_io.hpp"
#include "test_support.hpp"

using namespace genmine;
using testsupport::TempDir;
using testsupport::write_file;

TEST_CASE("source tags") {
  CHECK(SourceTag::parse("RefinedWeb").kind() == SourceTag::Kind::RefinedWeb);
  CHECK(SourceTag::parse("pile").name() == "pile");
  CHECK(SourceTag::parse("peS2o").kind() == SourceTag::Kind::Pes2o);
  const auto custom = SourceTag::parse("MyCrawl");
  CHECK(custom.kind() == SourceTag::Kind::Other);
  CHECK(custom.name() == "mycrawl");
}

TEST_CASE("reads documents and tallies bad lines without stopping") {
  TempDir tmp;
  const auto path = tmp / "in.jsonl";
  write_file(path,
             "{\"id\":\"a\",\"text\":\"Tigers have stripes.\"}\n"
             "not json\n"
             "\n"
             "[1,2]\n"
             "{\"id\":\"b\"}\n"
             "{\"text\":\"No id here.\"}\n"
             "{\"id\":7,\"text\":\"Numeric id.\"}\n"
             "{\"id\":\"a\",\"text\":\"Duplicate.\"}\n"
             "{\"id\":\"big\",\"text\":\"" + std::string(200, 'x') + "\"}\n"
             "{\"id\":{},\"text\":\"bad id\"}\n");
  IngestOptions opt;
  opt.max_doc_bytes = 100;
  DocumentReader reader(path.string(), SourceTag::parse("pile"), opt);
  std::vector<Document> docs;
  while (auto d = reader.next()) docs.push_back(std::move(*d));
  REQUIRE(docs.size() == 3);
  CHECK(docs[0].doc_id == "a");
  CHECK(docs[0].source.name() == "pile");
  CHECK(docs[1].doc_id == "pile:5");
  CHECK(docs[2].doc_id == "7");
  const auto& t = reader.tally();
  CHECK(t.documents == 3);
  CHECK(t.malformed == 3);
  CHECK(t.missing_text == 1);
  CHECK(t.duplicate_id == 1);
  CHECK(t.oversize == 1);
  std::vector<std::string> reasons;
  for (const auto& e : reader.errors()) {
    CHECK(e.stage == "ingest");
    CHECK(e.file == path.string());
    reasons.push_back(e.reason);
  }
  CHECK(reasons == std::vector<std::string>{"malformed", "malformed", "missing-text", "duplicate-id", "oversize",
                                            "malformed"});
  CHECK(reader.errors()[0].line == 1);
}

TEST_CASE("duplicate ids are detected across files with a shared set") {
  TempDir tmp;
  write_file(tmp / "a.jsonl", "{\"id\":\"x\",\"text\":\"One.\"}\n");
  write_file(tmp / "b.jsonl", "{\"id\":\"x\",\"text\":\"Two.\"}\n{\"id\":\"y\",\"text\":\"Three.\"}\n");
  std::unordered_set<std::string> seen;
  DocumentReader a((tmp / "a.jsonl").string(), SourceTag::parse("pile"), {}, &seen);
  DocumentReader b((tmp / "b.jsonl").string(), SourceTag::parse("pile"), {}, &seen);
  while (a.next()) {
  }
  std::size_t n = 0;
  while (b.next()) ++n;
  CHECK(n == 1);
  CHECK(b.tally().duplicate_id == 1);
}

TEST_CASE("missing file throws") {
  CHECK_THROWS_AS(DocumentReader("/nonexistent/x.jsonl", SourceTag::parse("pile")), std::runtime_error);
}

TEST_CASE("load_documents on the fixture corpus") {
  std::vector<RecordError> errors;
  const auto docs = load_documents(testsupport::fixture("corpus_web.jsonl"), SourceTag::parse("refinedweb"), &errors);
  CHECK(docs.size() > 0);
  for (const auto& d : docs) CHECK(!d.text.empty());
}
