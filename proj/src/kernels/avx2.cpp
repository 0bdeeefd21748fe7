// Compiled with -mavx2 -mfma; only called after a runtime CPU check.

#include <immintrin.h>

#include <cstdint>

#include "genmine/kernels.hpp"

namespace genmine::kernels::avx2 {

double dot(const float* a, const float* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256 va = _mm256_loadu_ps(a + i);
    __m256 vb = _mm256_loadu_ps(b + i);
    __m256d a_lo = _mm256_cvtps_pd(_mm256_castps256_ps128(va));
    __m256d a_hi = _mm256_cvtps_pd(_mm256_extractf128_ps(va, 1));
    __m256d b_lo = _mm256_cvtps_pd(_mm256_castps256_ps128(vb));
    __m256d b_hi = _mm256_cvtps_pd(_mm256_extractf128_ps(vb, 1));
    acc0 = _mm256_fmadd_pd(a_lo, b_lo, acc0);
    acc1 = _mm256_fmadd_pd(a_hi, b_hi, acc1);
  }
  __m256d acc = _mm256_add_pd(acc0, acc1);
  __m128d lo = _mm256_castpd256_pd128(acc);
  __m128d hi = _mm256_extractf128_pd(acc, 1);
  __m128d sum2 = _mm_add_pd(lo, hi);
  double total = _mm_cvtsd_f64(_mm_add_sd(sum2, _mm_unpackhi_pd(sum2, sum2)));
  for (; i < n; ++i) total += static_cast<double>(a[i]) * static_cast<double>(b[i]);
  return total;
}

std::size_t count_words(const char* s, std::size_t n) {
  const __m256i space = _mm256_set1_epi8(' ');
  const __m256i tab_lo = _mm256_set1_epi8('\t' - 1);
  const __m256i cr_hi = _mm256_set1_epi8('\r' + 1);
  std::size_t words = 0;
  std::uint32_t prev_ws = 1;  // start of text counts as whitespace
  std::size_t i = 0;
  for (; i + 32 <= n; i += 32) {
    __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(s + i));
    // '\t'..'\r' via signed compares; bytes >= 0x80 are negative and fail both.
    __m256i in_ctrl = _mm256_and_si256(_mm256_cmpgt_epi8(v, tab_lo), _mm256_cmpgt_epi8(cr_hi, v));
    __m256i is_ws = _mm256_or_si256(_mm256_cmpeq_epi8(v, space), in_ctrl);
    auto ws = static_cast<std::uint32_t>(_mm256_movemask_epi8(is_ws));
    std::uint32_t starts = ~ws & ((ws << 1) | prev_ws);
    words += static_cast<std::size_t>(__builtin_popcount(starts));
    prev_ws = ws >> 31;
  }
  bool prev = prev_ws != 0;
  for (; i < n; ++i) {
    auto c = static_cast<unsigned char>(s[i]);
    bool cur = c == ' ' || (c >= '\t' && c <= '\r');
    if (prev && !cur) ++words;
    prev = cur;
  }
  return words;
}

}  // namespace genmine::kernels::avx2
