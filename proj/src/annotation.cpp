#include "genmine/annotation.hpp"

#include <ctime>
#include <fstream>
#include <set>
#include <stdexcept>

#include "genmine/dataset.hpp"
#include "genmine/sampling.hpp"
#include "genmine/text_util.hpp"

namespace genmine {

namespace {
constexpr Judgment kJudgments[] = {Judgment::Generic, Judgment::Particular, Judgment::Unclear};
}

std::string_view judgment_name(Judgment j) {
  switch (j) {
    case Judgment::Generic: return "Generic";
    case Judgment::Particular: return "Particular";
    case Judgment::Unclear: return "Unclear";
  }
  return "Unclear";
}

std::optional<Judgment> parse_judgment(std::string_view s) {
  const std::string lower = lowercase(s);
  for (Judgment j : kJudgments) {
    if (lowercase(judgment_name(j)) == lower) return j;
  }
  return std::nullopt;
}

std::string utc_timestamp_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

bool is_utc_timestamp(std::string_view s) {
  // YYYY-MM-DDTHH:MM:SS[.fff]Z
  if (s.size() < 20 || s.back() != 'Z') return false;
  static constexpr std::string_view shape = "dddd-dd-ddTdd:dd:dd";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (shape[i] == 'd' ? !is_digit(s[i]) : s[i] != shape[i]) return false;
  }
  auto num = [&](std::size_t at) { return (s[at] - '0') * 10 + (s[at + 1] - '0'); };
  const int month = num(5), day = num(8);
  if (month < 1 || month > 12 || day < 1 || day > 31 || num(11) > 23 || num(14) > 59 || num(17) > 60) return false;
  std::string_view frac = s.substr(shape.size(), s.size() - shape.size() - 1);
  if (frac.empty()) return true;
  if (frac.size() < 2 || frac[0] != '.') return false;
  for (char c : frac.substr(1)) {
    if (!is_digit(c)) return false;
  }
  return true;
}

nlohmann::json to_json(const AnnotationLabel& l) {
  return {{"record_id", l.record_id},
          {"annotator_id", l.annotator_id},
          {"label", std::string(judgment_name(l.label))},
          {"timestamp", l.timestamp}};
}

Result<AnnotationLabel> label_from_json(const nlohmann::json& j) {
  if (!j.is_object()) return Error{"bad-field", "expected an object"};
  for (const char* key : {"record_id", "annotator_id", "label"}) {
    if (!j.contains(key) || !j[key].is_string() || j[key].get_ref<const std::string&>().empty()) {
      return Error{"bad-field", std::string(key) + " must be a non-empty string"};
    }
  }
  AnnotationLabel l;
  l.record_id = j["record_id"].get<std::string>();
  l.annotator_id = j["annotator_id"].get<std::string>();
  auto judgment = parse_judgment(j["label"].get<std::string>());
  if (!judgment) return Error{"bad-label", j["label"].get<std::string>()};
  l.label = *judgment;
  if (j.contains("timestamp") && !j["timestamp"].is_null()) {
    if (!j["timestamp"].is_string() || !is_utc_timestamp(j["timestamp"].get<std::string>())) {
      return Error{"bad-timestamp", j["timestamp"].dump()};
    }
    l.timestamp = j["timestamp"].get<std::string>();
  } else {
    l.timestamp = utc_timestamp_now();
  }
  return l;
}

// ---------------------------------------------------------------------------
// Agreement

AgreementReport agreement(std::span<const AnnotationLabel> labels) {
  std::map<std::pair<std::string, std::string>, Judgment> final;
  for (const auto& l : labels) final[{l.record_id, l.annotator_id}] = l.label;

  std::map<std::string, std::map<std::string, Judgment>> by_item;
  std::set<std::string> annotators;
  std::map<Judgment, std::size_t> pooled;
  for (const auto& [key, j] : final) {
    by_item[key.first][key.second] = j;
    annotators.insert(key.second);
    ++pooled[j];
  }

  AgreementReport r;
  r.n_items = by_item.size();
  r.n_labels = final.size();
  r.n_annotators = annotators.size();
  for (Judgment j : kJudgments) {
    r.distribution[std::string(judgment_name(j))] =
        r.n_labels == 0 ? 0.0 : 100.0 * static_cast<double>(pooled[j]) / static_cast<double>(r.n_labels);
  }

  std::size_t agreeing = 0;
  for (const auto& [item, by_annotator] : by_item) {
    if (by_annotator.size() < 2) continue;
    ++r.n_double_labeled;
    const Judgment first = by_annotator.begin()->second;
    bool same = true;
    for (const auto& [a, j] : by_annotator) same = same && j == first;
    if (same) ++agreeing;
  }
  if (r.n_double_labeled > 0) {
    r.percent_agreement = 100.0 * static_cast<double>(agreeing) / static_cast<double>(r.n_double_labeled);
  }

  if (annotators.size() == 2 && r.n_double_labeled > 0) {
    const std::string& a = *annotators.begin();
    const std::string& b = *annotators.rbegin();
    std::map<Judgment, double> pa, pb;
    double po = 0.0;
    const auto n = static_cast<double>(r.n_double_labeled);
    for (const auto& [item, by_annotator] : by_item) {
      if (by_annotator.size() < 2) continue;
      const Judgment ja = by_annotator.at(a);
      const Judgment jb = by_annotator.at(b);
      pa[ja] += 1.0 / n;
      pb[jb] += 1.0 / n;
      if (ja == jb) po += 1.0 / n;
    }
    double pe = 0.0;
    for (Judgment j : kJudgments) pe += pa[j] * pb[j];
    if (pe < 1.0) r.cohen_kappa = (po - pe) / (1.0 - pe);
  }
  return r;
}

nlohmann::json to_json(const AgreementReport& r) {
  nlohmann::json j = {{"n_items", r.n_items},
                      {"n_double_labeled", r.n_double_labeled},
                      {"n_labels", r.n_labels},
                      {"n_annotators", r.n_annotators},
                      {"distribution", r.distribution}};
  j["percent_agreement"] = r.percent_agreement ? nlohmann::json(*r.percent_agreement) : nlohmann::json(nullptr);
  j["cohen_kappa"] = r.cohen_kappa ? nlohmann::json(*r.cohen_kappa) : nlohmann::json(nullptr);
  return j;
}

std::vector<std::string> sample_batch(std::span<const std::string> ids, std::size_t n, std::uint64_t seed) {
  if (ids.empty()) throw std::invalid_argument("cannot sample from an empty dataset");
  std::vector<std::string> out;
  for (std::size_t i : sample_indices(ids.size(), n, seed)) out.push_back(ids[i]);
  return out;
}

// ---------------------------------------------------------------------------
// Label log

LabelLog::LabelLog(std::filesystem::path path) : path_(std::move(path)) {
  if (path_.has_parent_path()) std::filesystem::create_directories(path_.parent_path());
  std::ifstream in(path_, std::ios::binary);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto j = nlohmann::json::parse(line, nullptr, false);
    auto label = j.is_discarded() ? Result<AnnotationLabel>(Error{"malformed", ""}) : label_from_json(j);
    if (!label.ok() || !j.contains("timestamp")) {
      ++skipped_;
      continue;
    }
    ++lines_;
    apply(*label);
  }
}

bool LabelLog::apply(const AnnotationLabel& label) {
  auto [it, inserted] = final_.insert_or_assign({label.record_id, label.annotator_id}, label);
  if (!inserted) ++overwrites_;
  return !inserted;
}

bool LabelLog::record(const AnnotationLabel& label) {
  std::lock_guard lock(mu_);
  const bool overwrite = final_.count({label.record_id, label.annotator_id}) > 0;
  nlohmann::json j = to_json(label);
  j["overwrite"] = overwrite;
  std::ofstream out(path_, std::ios::binary | std::ios::app);
  out << j.dump() << '\n';
  out.flush();
  if (!out) throw std::runtime_error("cannot append to " + path_.string());
  ++lines_;
  apply(label);
  return overwrite;
}

std::vector<AnnotationLabel> LabelLog::final_labels() const {
  std::lock_guard lock(mu_);
  std::vector<AnnotationLabel> out;
  out.reserve(final_.size());
  for (const auto& [key, l] : final_) out.push_back(l);
  return out;
}

std::optional<Judgment> LabelLog::label_of(const std::string& record_id, const std::string& annotator_id) const {
  std::lock_guard lock(mu_);
  auto it = final_.find({record_id, annotator_id});
  if (it == final_.end()) return std::nullopt;
  return it->second.label;
}

std::size_t LabelLog::lines() const {
  std::lock_guard lock(mu_);
  return lines_;
}

std::size_t LabelLog::overwrites() const {
  std::lock_guard lock(mu_);
  return overwrites_;
}

AgreementReport LabelLog::report() const {
  const auto labels = final_labels();
  return agreement(labels);
}

// ---------------------------------------------------------------------------
// Batch

std::vector<AnnotationItem> load_annotation_batch(const std::filesystem::path& run_dir, std::size_t n,
                                                  std::uint64_t seed) {
  auto records = read_records(run_dir / "records.jsonl");
  std::vector<std::string> ids;
  std::map<std::string, std::size_t> by_id;
  for (std::size_t i = 0; i < records.size(); ++i) {
    ids.push_back(records[i].record_id);
    by_id[records[i].record_id] = i;
  }
  DocumentStore docs(run_dir / "docs");
  std::vector<AnnotationItem> items;
  for (const auto& id : sample_batch(ids, n, seed)) {
    const MGenRecord& r = records[by_id.at(id)];
    std::string context = r.context ? *r.context : docs.get(r.doc_id).value_or("");
    items.push_back({r.record_id, r.sentence, utf8_prefix(context, kContextExcerptChars)});
  }
  return items;
}

}  // namespace genmine
