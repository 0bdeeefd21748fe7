#include "genmine/kernels.hpp"

namespace genmine::kernels::scalar {

double dot(const float* a, const float* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += static_cast<double>(a[i]) * static_cast<double>(b[i]);
  return acc;
}

namespace {
inline bool ws(unsigned char c) { return c == ' ' || (c >= '\t' && c <= '\r'); }
}  // namespace

std::size_t count_words(const char* s, std::size_t n) {
  std::size_t words = 0;
  bool prev_ws = true;
  for (std::size_t i = 0; i < n; ++i) {
    bool cur_ws = ws(static_cast<unsigned char>(s[i]));
    if (prev_ws && !cur_ws) ++words;
    prev_ws = cur_ws;
  }
  return words;
}

}  // namespace genmine::kernels::scalar
