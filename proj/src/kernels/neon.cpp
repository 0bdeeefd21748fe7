#include <arm_neon.h>

#include <cstdint>

#include "genmine/kernels.hpp"

namespace genmine::kernels::neon {

double dot(const float* a, const float* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    float32x4_t va = vld1q_f32(a + i);
    float32x4_t vb = vld1q_f32(b + i);
    acc0 = vfmaq_f64(acc0, vcvt_f64_f32(vget_low_f32(va)), vcvt_f64_f32(vget_low_f32(vb)));
    acc1 = vfmaq_f64(acc1, vcvt_high_f64_f32(va), vcvt_high_f64_f32(vb));
  }
  double total = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) total += static_cast<double>(a[i]) * static_cast<double>(b[i]);
  return total;
}

std::size_t count_words(const char* s, std::size_t n) {
  const uint8x16_t space = vdupq_n_u8(' ');
  const uint8x16_t tab = vdupq_n_u8('\t');
  const uint8x16_t span = vdupq_n_u8('\r' - '\t');
  std::size_t words = 0;
  bool prev = true;
  std::size_t i = 0;
  alignas(16) std::uint8_t lanes[16];
  for (; i + 16 <= n; i += 16) {
    uint8x16_t v = vld1q_u8(reinterpret_cast<const std::uint8_t*>(s + i));
    uint8x16_t ws = vorrq_u8(vceqq_u8(v, space), vcleq_u8(vsubq_u8(v, tab), span));
    vst1q_u8(lanes, ws);
    for (int k = 0; k < 16; ++k) {
      bool cur = lanes[k] != 0;
      if (prev && !cur) ++words;
      prev = cur;
    }
  }
  for (; i < n; ++i) {
    auto c = static_cast<unsigned char>(s[i]);
    bool cur = c == ' ' || (c >= '\t' && c <= '\r');
    if (prev && !cur) ++words;
    prev = cur;
  }
  return words;
}

}  // namespace genmine::kernels::neon
