#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "genmine/analysis.hpp"
#include "genmine/embeddings.hpp"
#include "genmine/scoring.hpp"
#include "test_support.hpp"

using namespace genmine;
using testsupport::oracle_cossim;
using testsupport::oracle_cossim_centroid;
using testsupport::oracle_distinct;

namespace {

std::optional<double> div_of(const std::vector<std::vector<float>>& vs) {
  std::vector<EmbeddingView> views(vs.begin(), vs.end());
  return diversity_from_similarity(views).value;
}

std::vector<std::vector<float>> random_group(std::mt19937_64& rng, std::size_t n, std::size_t dim) {
  std::normal_distribution<float> g(0.0f, 1.0f);
  std::vector<std::vector<float>> out(n, std::vector<float>(dim));
  for (auto& v : out) {
    for (auto& x : v) x = g(rng);
  }
  return out;
}

}  // namespace

TEST_CASE("word count") {
  CHECK(word_count("Words have power.") == 3);
  CHECK(word_count("  a\tb\n c ") == 3);
  CHECK(word_count("") == 0);
  CHECK(word_count("Soybeans contain an inhibitor of trypsin, an enzyme important for digestion, but it can be "
                   "destroyed by cooking.") == 18);
}

TEST_CASE("length examples") {
  std::istringstream in(testsupport::read_file(testsupport::fixture("length_examples.tsv")));
  std::string line;
  std::vector<std::string> sentences;
  while (std::getline(in, line)) {
    const auto tab = line.find('\t');
    const auto expected = std::stoul(line.substr(0, tab));
    sentences.push_back(line.substr(tab + 1));
    CHECK(word_count(sentences.back()) == expected);
  }
  const auto s = length_stats(sentences);
  CHECK(s.n == 23);
  CHECK(*s.mean == doctest::Approx(14.0));
  CHECK(*s.median == 14);
  CHECK(s.histogram.size() == 23);
  const auto j = to_json(s);
  CHECK(j["median"] == 14);
  const auto csv = length_plot_csv(s);
  CHECK(csv.rfind("length,percentage\n", 0) == 0);
}

TEST_CASE("length stats edge cases") {
  LengthAccumulator a;
  CHECK_FALSE(a.stats().mean);
  CHECK(to_json(a.stats())["median"].is_null());
  a.add_length(2);
  a.add_length(4);
  auto s = a.stats();
  CHECK(*s.median == 2);  // lower middle
  CHECK(*s.mean == 3.0);
  CHECK(*s.stddev == 1.0);
  LengthAccumulator b;
  b.add_length(9);
  a.merge(b);
  CHECK(a.stats().n == 3);
  CHECK(*a.stats().median == 4);
}

TEST_CASE("common words") {
  const WordSet stop = {"the", "are"};
  const std::vector<std::string> s = {"The tigers are big.", "Tigers, tigers!", "Big cats --"};
  const auto top = common_words(s, stop, 2);
  REQUIRE(top.size() == 2);
  CHECK(top[0] == WordCount{"tigers", 3});
  CHECK(top[1] == WordCount{"big", 2});
}

TEST_CASE("cosine diversity on known groups") {
  CHECK(*div_of({{0.6f, 0.8f, 0.0f}, {0.6f, 0.8f, 0.0f}, {3.0f, 4.0f, 0.0f}}) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(*div_of({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}) == doctest::Approx(0.0));
  CHECK(*div_of({{1, 0}, {1, 1}, {0, 1}}) == doctest::Approx(-std::sqrt(2.0) / 3.0).epsilon(1e-12));
  CHECK(*div_of({{1, 0}, {-1, 0}}) == doctest::Approx(1.0));
  CHECK_FALSE(div_of({{1, 0}}));
  const std::vector<std::vector<float>> with_zero = {{0, 0}, {1, 0}, {0, 1}};
  std::vector<EmbeddingView> views(with_zero.begin(), with_zero.end());
  const auto d = diversity_from_similarity(views);
  CHECK(d.used == 2);
  CHECK(d.dropped_zero == 1);
  const std::vector<std::vector<float>> mixed = {{1, 0}, {1, 0, 0}};
  std::vector<EmbeddingView> mv(mixed.begin(), mixed.end());
  CHECK_THROWS_AS(diversity_from_similarity(mv), std::invalid_argument);
}

TEST_CASE("cosine diversity matches both oracles and ignores order") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + rng() % 40;
    const std::size_t dim = 1 + rng() % 70;
    auto g = random_group(rng, n, dim);
    const double got = *div_of(g);
    CHECK(got == doctest::Approx(static_cast<double>(oracle_cossim(g))).epsilon(1e-9));
    CHECK(got == doctest::Approx(static_cast<double>(oracle_cossim_centroid(g))).epsilon(1e-9));
    CHECK(got >= -1.0 - 1e-12);
    auto shuffled = g;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    CHECK(*div_of(shuffled) == got);  // exact
  }
}

TEST_CASE("report over groups is thread-count independent") {
  std::mt19937_64 rng(5);
  std::vector<std::vector<std::vector<float>>> store;
  for (int i = 0; i < 20; ++i) store.push_back(random_group(rng, 10, 16));
  store.push_back({{1, 0}});  // skipped
  std::vector<std::vector<EmbeddingView>> groups;
  for (const auto& g : store) groups.emplace_back(g.begin(), g.end());
  const auto one = diversity_cossim(groups, 1);
  const auto four = diversity_cossim(groups, 4);
  CHECK(one.per_group == four.per_group);
  CHECK(*one.mean == *four.mean);
  CHECK(one.groups == 21);
  CHECK(one.groups_skipped == 1);
  CHECK(one.per_group.size() == 20);
}

TEST_CASE("distinct n-grams") {
  const auto tok = default_tokenizer();
  const std::vector<std::string> ab = {"a b", "b a"};
  auto r = distinct_n(ab, tok, {1, 2, 3}, 0);
  CHECK(r.distinct.at(1) == 2);
  CHECK(r.distinct.at(2) == 2);
  CHECK(r.distinct.at(3) == 0);
  CHECK(r.tokens == 4);
  // Bigrams do not cross sentence boundaries.
  const std::vector<std::string> two = {"x y", "z"};
  CHECK(distinct_n(two, tok, {2}, 0).distinct.at(2) == 1);
  CHECK(tok("The Cat, the cat!") == std::vector<std::string>{"the", "cat", "the", "cat"});
}

TEST_CASE("distinct n-grams match a set oracle on random text") {
  std::mt19937_64 rng(31);
  const std::vector<std::string> vocab = {"a", "b", "c", "d", "e"};
  const auto tok = default_tokenizer();
  for (int trial = 0; trial < 120; ++trial) {
    std::vector<std::string> sentences;
    std::vector<std::vector<std::string>> tokenized;
    const int m = 1 + static_cast<int>(rng() % 12);
    for (int i = 0; i < m; ++i) {
      std::string s;
      std::vector<std::string> t;
      const int len = static_cast<int>(rng() % 8);
      for (int k = 0; k < len; ++k) {
        t.push_back(vocab[rng() % vocab.size()]);
        s += t.back() + " ";
      }
      sentences.push_back(s);
      tokenized.push_back(t);
    }
    const auto r = distinct_n(sentences, tok, {1, 2, 3}, 0);
    for (int n = 1; n <= 3; ++n) REQUIRE(r.distinct.at(n) == oracle_distinct(tokenized, static_cast<std::size_t>(n)));
    // Appending sentences never lowers a count.
    auto more = sentences;
    more.push_back("a b c d e");
    const auto r2 = distinct_n(more, tok, {1, 2, 3}, 0);
    for (int n = 1; n <= 3; ++n) REQUIRE(r2.distinct.at(n) >= r.distinct.at(n));
  }
}

TEST_CASE("distinct token budget stops after the crossing sentence") {
  const std::vector<std::string> s = {"a b c", "d e f", "g h i"};
  const auto r = distinct_n(s, default_tokenizer(), {1}, 4);
  CHECK(r.sentences == 2);
  CHECK(r.tokens == 6);
  CHECK(r.distinct.at(1) == 6);
}

TEST_CASE("head lemmas") {
  for (const auto& e : testsupport::load_treebank()) {
    const auto expect = e.get("expect_lemmas");
    if (expect.empty()) continue;
    CAPTURE(e.get("key"));
    const auto h = extract_head_lemmas(e.parsed);
    std::vector<std::string> want;
    std::stringstream ss(expect);
    std::string part;
    while (std::getline(ss, part, ',')) want.push_back(part);
    REQUIRE(want.size() == 3);
    auto as_str = [](const std::optional<std::string>& o) { return o ? *o : std::string("-"); };
    CHECK(as_str(h.subject) == want[0]);
    CHECK(as_str(h.verb) == want[1]);
    CHECK(as_str(h.object) == want[2]);
  }
}

TEST_CASE("head lemma counts are distinct sets") {
  const auto bank = testsupport::load_treebank();
  std::vector<ParsedSentence> parses;
  for (const auto& e : bank) parses.push_back(e.parsed);
  const auto all = head_lemmas(parses, 0);
  CHECK(all.sentences == parses.size());
  HeadLemmaAccumulator acc;
  for (const auto& p : parses) acc.add(p);
  CHECK(acc.counts() == all);
  std::set<std::string> subjects;
  for (const auto& p : parses) {
    if (auto s = extract_head_lemmas(p).subject) subjects.insert(*s);
  }
  CHECK(all.subject == subjects.size());
  CHECK(head_lemmas(parses, 5).sentences == 5);
}

TEST_CASE("embeddings reader") {
  testsupport::TempDir tmp;
  testsupport::write_file(tmp / "e.jsonl",
                          "{\"id\":\"a\",\"vec\":[1,2]}\n"
                          "{\"id\":\"b\",\"vec\":[1,2,3]}\n"
                          "oops\n"
                          "{\"id\":\"a\",\"vec\":[3,4]}\n"
                          "{\"id\":\"c\",\"vec\":[0,1]}\n");
  std::vector<RecordError> errors;
  const auto t = read_embeddings((tmp / "e.jsonl").string(), &errors);
  CHECK(t.dim == 2);
  CHECK(t.order == std::vector<std::string>{"a", "c"});
  CHECK(t.vectors.at("a") == std::vector<float>{1, 2});
  CHECK(errors.size() == 3);
  const auto ident = read_embeddings(testsupport::fixture("embeddings_identical.jsonl"));
  std::vector<EmbeddingView> views;
  for (const auto& id : ident.order) views.emplace_back(ident.vectors.at(id));
  CHECK(*diversity_from_similarity(views).value == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("report json") {
  DiversityReport r;
  r.distinct = DistinctReport{{{1, 5}}, 10, 2};
  const auto j = to_json(r);
  CHECK((!j.contains("d_cossim") || j["d_cossim"].is_null()));
  CHECK(j["distinct"]["tokens"] == 10);
  CHECK(to_text(r).find("distinct-1") != std::string::npos);
}
