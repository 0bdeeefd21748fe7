#pragma once

// Fixture access, temp directories and brute-force oracles shared by the
// unit tests and the acceptance runner. The oracles restate each rule
// directly and do not call the library code they check.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "genmine/conllu.hpp"
#include "genmine/linguistic.hpp"

namespace testsupport {

inline std::string fixture(const std::string& name) { return std::string(GENMINE_FIXTURES) + "/" + name; }

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& p, const std::string& s) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << s;
}

class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    std::mt19937_64 rng(rd());
    path_ = std::filesystem::temp_directory_path() / ("genmine-test-" + std::to_string(rng()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

// ---------------------------------------------------------------------------
// Treebank with "# expect_* = ..." comments

struct TreebankEntry {
  genmine::ParsedSentence parsed;
  std::map<std::string, std::string> meta;  // comment key -> value

  std::string get(const std::string& key) const {
    auto it = meta.find(key);
    return it == meta.end() ? std::string() : it->second;
  }
};

inline std::vector<TreebankEntry> load_treebank(const std::string& path = fixture("treebank.conllu")) {
  std::istringstream in(read_file(path));
  std::vector<TreebankEntry> out;
  std::string line, block;
  std::map<std::string, std::string> meta;
  auto flush = [&] {
    if (block.empty()) return;
    auto parsed = genmine::parse_conllu_block(block, genmine::Metadata::Required);
    if (!parsed) throw std::runtime_error("treebank block failed: " + parsed.error().reason);
    out.push_back({std::move(parsed).value(), meta});
    block.clear();
    meta.clear();
  };
  while (std::getline(in, line)) {
    if (line.empty()) {
      flush();
      continue;
    }
    if (line.rfind("# ", 0) == 0) {
      const auto eq = line.find(" = ");
      if (eq != std::string::npos) meta[line.substr(2, eq - 2)] = line.substr(eq + 3);
    }
    block += line + "\n";
  }
  flush();
  return out;
}

// ---------------------------------------------------------------------------
// Bare-plural oracle: every (subject, verb) token pair is tested against the
// three conditions; the sentence passes iff some pair satisfies all of them.

struct OracleVerdict {
  std::string verdict;  // pass | no-plural-subject | bad-root | bad-verb-feats
  int subject = 0;
  int verb = 0;
};

inline OracleVerdict oracle_bare_plural(const genmine::ParsedSentence& s) {
  using genmine::Token;
  using genmine::Upos;
  const auto& toks = s.tokens;
  const Token* root = nullptr;
  for (const auto& t : toks) {
    if (t.head == 0) root = &t;
  }
  if (root == nullptr) return {"bad-root"};
  auto feat = [](const Token& t, const std::string& k) {
    auto it = t.feats.find(k);
    return it == t.feats.end() ? std::string() : it->second;
  };
  auto cond1 = [&](const Token& t) {
    return t.head == root->index && (t.deprel == "nsubj" || t.deprel == "nsubj:pass") &&
           (t.upos == Upos::NOUN || t.upos == Upos::PROPN) && feat(t, "Number") == "Plur";
  };
  auto marker = [&](const Token& t) { return t.head == root->index && (t.deprel == "cop" || t.deprel == "aux:pass"); };
  auto cond2 = [&](const Token& v) {
    bool any_marker = false;
    for (const auto& t : toks) {
      if (marker(t)) {
        any_marker = true;
        if (t.index < v.index) return false;  // an earlier marker is the verb
      }
    }
    if (any_marker) return marker(v);
    return v.index == root->index && (v.upos == Upos::VERB || v.upos == Upos::AUX);
  };
  auto cond3 = [&](const Token& v) {
    return feat(v, "Tense") == "Pres" && feat(v, "Mood") == "Ind" && feat(v, "Number") == "Plur" &&
           feat(v, "Person") == "3";
  };

  OracleVerdict out;
  bool any_subject = false, any_verb = false;
  for (const auto& sj : toks) {
    for (const auto& v : toks) {
      const bool c1 = cond1(sj), c2 = cond2(v);
      any_subject = any_subject || c1;
      any_verb = any_verb || c2;
      if (c1 && (out.subject == 0 || sj.index < out.subject)) out.subject = sj.index;
      if (c2) out.verb = v.index;
      if (c1 && c2 && cond3(v)) out.verdict = "pass";
    }
  }
  if (!out.verdict.empty()) return out;
  if (!any_subject) return {"no-plural-subject"};
  if (!any_verb) return {"bad-root", out.subject, 0};
  out.verdict = "bad-verb-feats";
  return out;
}

// ---------------------------------------------------------------------------
// Distinct n-gram oracle over pre-tokenized sentences.

inline std::size_t oracle_distinct(const std::vector<std::vector<std::string>>& sentences, std::size_t n) {
  std::set<std::vector<std::string>> seen;
  for (const auto& s : sentences) {
    for (std::size_t i = 0; i + n <= s.size(); ++i) seen.insert(std::vector<std::string>(s.begin() + i, s.begin() + i + n));
  }
  return seen.size();
}

// ---------------------------------------------------------------------------
// Negated mean pairwise cosine in long double over all unordered pairs;
// nullopt-like NaN when fewer than two non-zero vectors.

inline long double oracle_cossim(const std::vector<std::vector<float>>& group) {
  std::vector<std::vector<float>> v;
  for (const auto& x : group) {
    long double sq = 0;
    for (float f : x) sq += static_cast<long double>(f) * f;
    if (sq > 0) v.push_back(x);
  }
  if (v.size() < 2) return std::nanl("");
  long double total = 0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = i + 1; j < v.size(); ++j) {
      long double d = 0, a = 0, b = 0;
      for (std::size_t k = 0; k < v[i].size(); ++k) {
        d += static_cast<long double>(v[i][k]) * v[j][k];
        a += static_cast<long double>(v[i][k]) * v[i][k];
        b += static_cast<long double>(v[j][k]) * v[j][k];
      }
      total += d / std::sqrt(a * b);
      ++pairs;
    }
  }
  return -total / static_cast<long double>(pairs);
}

// Same quantity from the centroid: sum over i<j of cos = (|sum u_i|^2 - n) / 2
// for unit vectors u_i.
inline long double oracle_cossim_centroid(const std::vector<std::vector<float>>& group) {
  std::vector<std::vector<long double>> u;
  for (const auto& x : group) {
    long double sq = 0;
    for (float f : x) sq += static_cast<long double>(f) * f;
    if (!(sq > 0)) continue;
    std::vector<long double> y;
    for (float f : x) y.push_back(f / std::sqrt(sq));
    u.push_back(std::move(y));
  }
  if (u.size() < 2) return std::nanl("");
  std::vector<long double> sum(u[0].size(), 0);
  for (const auto& y : u) {
    for (std::size_t k = 0; k < y.size(); ++k) sum[k] += y[k];
  }
  long double norm2 = 0;
  for (auto x : sum) norm2 += x * x;
  const auto n = static_cast<long double>(u.size());
  return -((norm2 - n) / 2) / (n * (n - 1) / 2);
}

// ---------------------------------------------------------------------------
// CLI

inline std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  return out + "'";
}

// Runs the genmine binary; returns its exit status. Output is discarded
// unless `log` is given.
inline int run_cli(const std::vector<std::string>& args, const std::string& env = {},
                   const std::filesystem::path& log = {}) {
  std::string cmd = env.empty() ? std::string() : env + " ";
  cmd += shell_quote(GENMINE_CLI);
  for (const auto& a : args) cmd += " " + shell_quote(a);
  cmd += log.empty() ? " >/dev/null 2>&1" : " >" + shell_quote(log.string()) + " 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

inline std::vector<std::string> corpus_inputs() {
  return {"--input", fixture("corpus_web.jsonl") + "=refinedweb", "--input", fixture("corpus_pile.jsonl") + "=pile",
          "--input", fixture("corpus_s2.jsonl") + "=pes2o", "--parses", fixture("corpus.conllu")};
}

}  // namespace testsupport
