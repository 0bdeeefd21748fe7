#include "genmine/embeddings.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace genmine {

EmbeddingTable read_embeddings(const std::string& path, std::vector<RecordError>* errors) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  EmbeddingTable table;
  auto fail = [&](std::size_t line, std::string reason, std::string detail) {
    if (errors) errors->push_back({"embeddings", path, line, std::move(reason), std::move(detail)});
  };
  std::string line;
  std::size_t line_no = 0;
  for (; std::getline(in, line); ++line_no) {
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("id") || !j.contains("vec") || !j["id"].is_string() ||
        !j["vec"].is_array()) {
      fail(line_no, "malformed", "");
      continue;
    }
    std::vector<float> vec;
    vec.reserve(j["vec"].size());
    bool numeric = true;
    for (const auto& x : j["vec"]) {
      if (!x.is_number()) {
        numeric = false;
        break;
      }
      vec.push_back(x.get<float>());
    }
    if (!numeric || vec.empty()) {
      fail(line_no, "malformed", "vec must be a non-empty numeric array");
      continue;
    }
    if (table.dim == 0) table.dim = vec.size();
    if (vec.size() != table.dim) {
      fail(line_no, "dimension-mismatch", std::to_string(vec.size()) + " != " + std::to_string(table.dim));
      continue;
    }
    auto id = j["id"].get<std::string>();
    if (table.vectors.count(id) > 0) {
      fail(line_no, "duplicate-id", id);
      continue;
    }
    table.order.push_back(id);
    table.vectors.emplace(std::move(id), std::move(vec));
  }
  return table;
}

}  // namespace genmine
