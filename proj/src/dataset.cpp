#include "genmine/dataset.hpp"

#include <algorithm>
#include <cstdio>
#include <iomanip>
#include <sstream>

namespace genmine {

std::string make_record_id(const std::string& doc_id, std::size_t sent_index) {
  return doc_id + "#" + std::to_string(sent_index);
}

nlohmann::json to_json(const MGenRecord& r) {
  nlohmann::json j = {
      {"record_id", r.record_id},
      {"sentence", r.sentence},
      {"label", r.label.name()},
      {"score", r.score.value},
      {"scorer_id", r.score.scorer_id},
      {"source", r.source.name()},
      {"doc_id", r.doc_id},
      {"sent_index", r.sent_index},
      {"char_start", r.char_start},
      {"char_end", r.char_end},
  };
  if (!r.label.is_generic()) j["position"] = std::string(position_name(r.label.position));
  if (r.context) j["context"] = *r.context;
  return j;
}

MGenRecord record_from_json(const nlohmann::json& j) {
  try {
    MGenRecord r;
    r.record_id = j.at("record_id").get<std::string>();
    r.sentence = j.at("sentence").get<std::string>();
    const auto label = j.at("label").get<std::string>();
    if (label != "GEN") {
      auto q = QuantifierInventory::parse(label);
      if (!q) throw std::invalid_argument("unknown label: " + label);
      auto pos = parse_position(j.value("position", std::string("initial")));
      if (!pos) throw std::invalid_argument("unknown position");
      r.label = GenLabel::quantified(*q, *pos);
    }
    r.score.value = j.at("score").get<double>();
    r.score.scorer_id = j.value("scorer_id", std::string());
    r.source = SourceTag::parse(j.at("source").get<std::string>());
    r.doc_id = j.at("doc_id").get<std::string>();
    r.sent_index = j.at("sent_index").get<std::size_t>();
    r.char_start = j.at("char_start").get<std::size_t>();
    r.char_end = j.at("char_end").get<std::size_t>();
    if (j.contains("context")) r.context = j.at("context").get<std::string>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed record: ") + e.what());
  }
}

void sort_records(std::vector<MGenRecord>& records) {
  std::sort(records.begin(), records.end(), [](const MGenRecord& a, const MGenRecord& b) {
    if (a.doc_id != b.doc_id) return a.doc_id < b.doc_id;
    return a.sent_index < b.sent_index;
  });
}

RecordSink::RecordSink(const std::filesystem::path& path, SinkOptions options)
    : path_(path), options_(options), out_(path, std::ios::binary | std::ios::trunc) {
  if (!out_) throw std::runtime_error("cannot write " + path.string());
}

void RecordSink::emit(const MGenRecord& record, const std::string* context) {
  if (options_.min_score && !(record.score.value >= *options_.min_score)) {
    throw InvariantViolation("record " + record.record_id + " has score " + std::to_string(record.score.value) +
                             " below threshold " + std::to_string(*options_.min_score));
  }
  if (record.char_end <= record.char_start) {
    throw InvariantViolation("record " + record.record_id + " has an empty span");
  }
  nlohmann::json j = to_json(record);
  if (options_.inline_context) {
    if (context != nullptr) {
      j["context"] = *context;
    } else if (!record.context) {
      throw InvariantViolation("inline context requested but missing for " + record.record_id);
    }
  } else {
    j.erase("context");
  }
  out_ << j.dump() << '\n';
  if (!out_) throw std::runtime_error("write failed: " + path_.string());
  ++written_;
}

void RecordSink::close() {
  out_.flush();
  if (!out_) throw std::runtime_error("write failed: " + path_.string());
  out_.close();
}

std::vector<MGenRecord> read_records(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::vector<MGenRecord> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    try {
      out.push_back(record_from_json(nlohmann::json::parse(line)));
    } catch (const std::exception& e) {
      throw std::runtime_error(path.string() + ":" + std::to_string(n) + ": " + e.what());
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Tally

void TallyAccumulator::add(const GenLabel& label, bool accepted) {
  auto& c = counts_[label.name()];
  ++c.first;
  if (accepted) ++c.second;
}

void TallyAccumulator::merge(const TallyAccumulator& other) {
  for (const auto& [label, c] : other.counts_) {
    auto& mine = counts_[label];
    mine.first += c.first;
    mine.second += c.second;
  }
}

CountsTable TallyAccumulator::table() const {
  CountsTable t;
  for (const auto& row : label_rows()) {
    t.candidates[row] = 0;
    t.generalizations[row] = 0;
  }
  for (const auto& [label, c] : counts_) {
    t.candidates[label] = c.first;
    t.generalizations[label] = c.second;
    t.candidates_total += c.first;
    t.generalizations_total += c.second;
  }
  return t;
}

CountsTable tally(std::span<const TallyItem> items) {
  TallyAccumulator acc;
  for (const auto& it : items) acc.add(it.label, it.accepted);
  return acc.table();
}

std::vector<std::string> label_rows() {
  std::vector<std::string> rows{"GEN"};
  for (Quantifier q : QuantifierInventory::standard().all()) rows.emplace_back(QuantifierInventory::name(q));
  return rows;
}

nlohmann::json to_json(const CountsTable& t) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& label : label_rows()) {
    rows.push_back({{"label", label},
                    {"candidates", t.candidates.at(label)},
                    {"generalizations", t.generalizations.at(label)}});
  }
  return {{"rows", rows},
          {"candidates_total", t.candidates_total},
          {"generalizations_total", t.generalizations_total}};
}

std::string to_text_table(const CountsTable& t) {
  std::ostringstream os;
  os << std::left << std::setw(12) << "label" << std::right << std::setw(14) << "candidates" << std::setw(18)
     << "generalizations" << '\n';
  for (const auto& label : label_rows()) {
    os << std::left << std::setw(12) << label << std::right << std::setw(14) << t.candidates.at(label)
       << std::setw(18) << t.generalizations.at(label) << '\n';
  }
  os << std::left << std::setw(12) << "TOTAL" << std::right << std::setw(14) << t.candidates_total
     << std::setw(18) << t.generalizations_total << '\n';
  return os.str();
}

// ---------------------------------------------------------------------------
// Document store

DocumentStore::DocumentStore(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

std::string DocumentStore::escape_id(const std::string& doc_id) {
  std::string out;
  for (std::size_t i = 0; i < doc_id.size(); ++i) {
    const auto c = static_cast<unsigned char>(doc_id[i]);
    const bool safe = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' ||
                      c == '_' || (c == '.' && i > 0);
    if (safe) {
      out.push_back(static_cast<char>(c));
    } else {
      char buf[4];
      std::snprintf(buf, sizeof buf, "%%%02X", c);
      out += buf;
    }
  }
  return out;
}

std::filesystem::path DocumentStore::path_for(const std::string& doc_id) const {
  return dir_ / (escape_id(doc_id) + ".txt");
}

void DocumentStore::put(const Document& doc) {
  const auto path = path_for(doc.doc_id);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << doc.text;
  if (!out) throw std::runtime_error("cannot write document " + path.string());
}

std::optional<std::string> DocumentStore::get(const std::string& doc_id) const {
  std::ifstream in(path_for(doc_id), std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace genmine
