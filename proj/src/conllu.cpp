#include "genmine/conllu.hpp"

#include <charconv>
#include <stdexcept>
#include <utility>

#include "genmine/text_util.hpp"

namespace genmine {

namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> cols;
  std::size_t pos = 0;
  while (true) {
    std::size_t tab = line.find('\t', pos);
    if (tab == std::string_view::npos) {
      cols.push_back(line.substr(pos));
      return cols;
    }
    cols.push_back(line.substr(pos, tab - pos));
    pos = tab + 1;
  }
}

std::optional<int> parse_int(std::string_view s) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

// "# key = value" -> value when key matches.
std::optional<std::string_view> comment_value(std::string_view line, std::string_view key) {
  std::string_view body = trim(line.substr(1));
  if (body.substr(0, key.size()) != key) return std::nullopt;
  body = trim(body.substr(key.size()));
  if (body.empty() || body.front() != '=') return std::nullopt;
  return trim(body.substr(1));
}

std::string_view chomp(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

}  // namespace

Result<ParsedSentence> parse_conllu_block(std::string_view block, Metadata metadata) {
  ParsedSentence out;
  bool have_doc = false;
  bool have_index = false;

  std::size_t pos = 0;
  while (pos < block.size()) {
    std::size_t nl = block.find('\n', pos);
    if (nl == std::string_view::npos) nl = block.size();
    std::string_view line = chomp(block.substr(pos, nl - pos));
    pos = nl + 1;
    if (trim(line).empty()) continue;

    if (line.front() == '#') {
      if (auto v = comment_value(line, "doc_id")) {
        out.span_ref.doc_id = std::string(*v);
        have_doc = !v->empty();
      } else if (auto v2 = comment_value(line, "sent_index")) {
        auto idx = parse_int(*v2);
        if (!idx || *idx < 0) return Error{"missing-metadata", "bad sent_index"};
        out.span_ref.sent_index = static_cast<std::size_t>(*idx);
        have_index = true;
      } else if (auto v3 = comment_value(line, "text")) {
        out.text = std::string(*v3);
      }
      continue;
    }

    auto cols = split_tabs(line);
    if (cols.size() != 10) return Error{"bad-columns", std::string(line)};
    if (cols[0].find('-') != std::string_view::npos || cols[0].find('.') != std::string_view::npos) {
      continue;
    }
    Token tok;
    auto idx = parse_int(cols[0]);
    if (!idx) return Error{"bad-index", std::string(cols[0])};
    tok.index = *idx;
    tok.form = std::string(cols[1]);
    tok.lemma = std::string(cols[2]);
    auto upos = parse_upos(cols[3]);
    if (!upos) return Error{"bad-upos", std::string(cols[3])};
    tok.upos = *upos;
    tok.xpos = std::string(cols[4]);
    auto feats = parse_feats(cols[5]);
    if (!feats) return Error{"bad-feats", std::string(cols[5])};
    tok.feats = std::move(*feats);
    auto head = parse_int(cols[6]);
    if (!head) return Error{"bad-head", std::string(cols[6])};
    tok.head = *head;
    tok.deprel = std::string(cols[7]);
    tok.deps = std::string(cols[8]);
    tok.misc = std::string(cols[9]);
    out.tokens.push_back(std::move(tok));
  }

  if (metadata == Metadata::Required && !(have_doc && have_index)) {
    return Error{"missing-metadata", "need # doc_id and # sent_index"};
  }
  if (auto bad = validate(out)) return Error{*bad, {}};
  return out;
}

Result<std::vector<ParsedSentence>> parse_conllu_text(std::string_view text, Metadata metadata) {
  std::vector<ParsedSentence> out;
  std::size_t pos = 0;
  std::size_t block_start = 0;
  bool in_block = false;
  auto flush = [&](std::size_t end) -> std::optional<Error> {
    if (!in_block) return std::nullopt;
    in_block = false;
    auto r = parse_conllu_block(text.substr(block_start, end - block_start), metadata);
    if (!r) return r.error();
    out.push_back(std::move(r).value());
    return std::nullopt;
  };
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = chomp(text.substr(pos, nl - pos));
    if (trim(line).empty()) {
      if (auto err = flush(pos)) return *err;
    } else if (!in_block) {
      in_block = true;
      block_start = pos;
    }
    pos = nl + 1;
  }
  if (auto err = flush(text.size())) return *err;
  return out;
}

std::string to_conllu(const ParsedSentence& s) {
  std::string out;
  out += "# doc_id = " + s.span_ref.doc_id + "\n";
  out += "# sent_index = " + std::to_string(s.span_ref.sent_index) + "\n";
  if (!s.text.empty()) out += "# text = " + s.text + "\n";
  for (const Token& t : s.tokens) {
    out += std::to_string(t.index);
    out += '\t' + t.form + '\t' + t.lemma + '\t';
    out += upos_name(t.upos);
    out += '\t' + t.xpos + '\t' + format_feats(t.feats) + '\t' + std::to_string(t.head) + '\t' +
           t.deprel + '\t' + t.deps + '\t' + t.misc + '\n';
  }
  out += '\n';
  return out;
}

ConlluReader::ConlluReader(std::string path, Metadata metadata)
    : path_(std::move(path)), metadata_(metadata), in_(path_, std::ios::binary) {
  if (!in_) throw std::runtime_error("cannot open CoNLL-U file: " + path_);
}

std::optional<ParsedSentence> ConlluReader::next() {
  std::string block;
  std::size_t block_line = 0;
  std::string line;
  while (true) {
    bool got = static_cast<bool>(std::getline(in_, line));
    if (got) ++line_no_;
    const bool blank = !got || trim(line).empty();
    if (!blank) {
      if (block.empty()) block_line = line_no_;
      block += line;
      block += '\n';
      continue;
    }
    if (!block.empty()) {
      ++blocks_;
      auto r = parse_conllu_block(block, metadata_);
      if (r) return std::move(r).value();
      errors_.push_back(RecordError{"parse", path_, block_line, r.error().reason, r.error().detail});
      block.clear();
    }
    if (!got) {
      if (in_.bad()) throw std::runtime_error("read error on " + path_);
      return std::nullopt;
    }
  }
}

std::vector<ParsedSentence> read_parses(const std::string& path, std::vector<RecordError>* errors) {
  ConlluReader reader(path);
  std::vector<ParsedSentence> out;
  while (auto s = reader.next()) out.push_back(std::move(*s));
  if (errors != nullptr) errors->insert(errors->end(), reader.errors().begin(), reader.errors().end());
  return out;
}

}  // namespace genmine
