#pragma once

// Data-parallel inner loops. Every kernel has a scalar reference
// implementation; vector variants (AVX2+FMA on x86-64, NEON on AArch64)
// are picked once at startup from CPU features. Setting the environment
// variable GENMINE_SIMD=scalar forces the reference path.

#include <cstddef>
#include <span>
#include <string_view>

namespace genmine::kernels {

enum class Isa { Scalar, Avx2, Neon };

const char* isa_name(Isa isa);

struct KernelTable {
  Isa isa;
  // Dot product of equal-length float vectors, accumulated in double.
  double (*dot)(const float* a, const float* b, std::size_t n);
  // Number of maximal runs of non-whitespace bytes (ASCII whitespace).
  std::size_t (*count_words)(const char* s, std::size_t n);
};

namespace scalar {
double dot(const float* a, const float* b, std::size_t n);
std::size_t count_words(const char* s, std::size_t n);
}  // namespace scalar

#if defined(GENMINE_HAVE_AVX2)
namespace avx2 {
double dot(const float* a, const float* b, std::size_t n);
std::size_t count_words(const char* s, std::size_t n);
}  // namespace avx2
#endif

#if defined(GENMINE_HAVE_NEON)
namespace neon {
double dot(const float* a, const float* b, std::size_t n);
std::size_t count_words(const char* s, std::size_t n);
}  // namespace neon
#endif

// True if the running CPU can execute the given ISA's kernels.
bool isa_supported(Isa isa);

// Kernel table for a specific ISA; falls back to scalar if unsupported.
const KernelTable& table_for(Isa isa);

// The table selected at startup.
const KernelTable& active();

inline double dot(std::span<const float> a, std::span<const float> b) {
  return active().dot(a.data(), b.data(), a.size() < b.size() ? a.size() : b.size());
}

inline std::size_t count_words(std::string_view s) {
  return active().count_words(s.data(), s.size());
}

}  // namespace genmine::kernels
