#include "genmine/corpus_io.hpp"

#include <stdexcept>
#include <utility>

#include <json.hpp>

#include "genmine/text_util.hpp"

namespace genmine {

SourceTag SourceTag::parse(std::string_view name) {
  SourceTag tag;
  std::string key = lowercase(trim(name));
  if (key == "refinedweb") {
    tag.kind_ = Kind::RefinedWeb;
  } else if (key == "slimpajama") {
    tag.kind_ = Kind::SlimPajama;
  } else if (key == "pile" || key == "the_pile" || key == "thepile") {
    tag.kind_ = Kind::Pile;
    key = "pile";
  } else if (key == "pes2o") {
    tag.kind_ = Kind::Pes2o;
  } else if (key == "arxiv") {
    tag.kind_ = Kind::Arxiv;
  } else {
    tag.kind_ = Kind::Other;
    if (key.empty()) key = "other";
  }
  tag.name_ = std::move(key);
  return tag;
}

DocumentReader::DocumentReader(std::string path, SourceTag source, IngestOptions options,
                               std::unordered_set<std::string>* seen_ids)
    : path_(std::move(path)),
      source_(std::move(source)),
      options_(options),
      in_(path_, std::ios::binary),
      seen_ids_(seen_ids != nullptr ? seen_ids : &own_ids_) {
  if (!in_) throw std::runtime_error("cannot open input file: " + path_);
}

void DocumentReader::fail(std::size_t line, std::string reason, std::string detail) {
  errors_.push_back(RecordError{"ingest", path_, line, std::move(reason), std::move(detail)});
}

std::optional<Document> DocumentReader::next() {
  std::string line;
  while (std::getline(in_, line)) {
    const std::size_t line_no = line_no_++;
    ++tally_.lines;
    if (trim(line).empty()) continue;

    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      ++tally_.malformed;
      fail(line_no, "malformed", e.what());
      continue;
    }
    if (!rec.is_object()) {
      ++tally_.malformed;
      fail(line_no, "malformed", "record is not a JSON object");
      continue;
    }
    auto text_it = rec.find("text");
    if (text_it == rec.end() || !text_it->is_string()) {
      ++tally_.missing_text;
      fail(line_no, "missing-text");
      continue;
    }

    std::string doc_id;
    if (auto id_it = rec.find("id"); id_it != rec.end()) {
      if (id_it->is_string()) {
        doc_id = id_it->get<std::string>();
      } else if (id_it->is_number_integer()) {
        doc_id = id_it->dump();
      } else if (!id_it->is_null()) {
        ++tally_.malformed;
        fail(line_no, "malformed", "\"id\" must be a string or integer");
        continue;
      }
    }
    if (doc_id.empty()) doc_id = source_.name() + ":" + std::to_string(line_no);

    auto& text = text_it->get_ref<std::string&>();
    if (text.size() > options_.max_doc_bytes) {
      ++tally_.oversize;
      fail(line_no, "oversize", doc_id);
      continue;
    }
    if (!seen_ids_->insert(doc_id).second) {
      ++tally_.duplicate_id;
      fail(line_no, "duplicate-id", doc_id);
      continue;
    }
    ++tally_.documents;
    return Document{std::move(doc_id), source_, std::move(text)};
  }
  if (in_.bad()) throw std::runtime_error("read error on " + path_);
  return std::nullopt;
}

std::vector<Document> load_documents(const std::string& path, const SourceTag& source,
                                     std::vector<RecordError>* errors, IngestOptions options) {
  DocumentReader reader(path, source, options);
  std::vector<Document> docs;
  while (auto doc = reader.next()) docs.push_back(std::move(*doc));
  if (errors != nullptr) errors->insert(errors->end(), reader.errors().begin(), reader.errors().end());
  return docs;
}

}  // namespace genmine
