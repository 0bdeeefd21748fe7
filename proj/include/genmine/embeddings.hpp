#pragma once

#include <cstddef>
#include <string>
#include <unordered_map>
#include <vector>

#include "genmine/corpus_io.hpp"

namespace genmine {

// record_id -> vector, read from {"id": ..., "vec": [...]} lines.
struct EmbeddingTable {
  std::size_t dim = 0;
  std::unordered_map<std::string, std::vector<float>> vectors;
  std::vector<std::string> order;  // ids in file order
};

// The first valid line fixes the dimension. Malformed lines, duplicate ids
// and dimension mismatches are skipped and recorded in *errors.
// Throws std::runtime_error if the file cannot be opened.
EmbeddingTable read_embeddings(const std::string& path, std::vector<RecordError>* errors = nullptr);

}  // namespace genmine
