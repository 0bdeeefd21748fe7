#include <cstdlib>
#include <cstring>

#include "genmine/kernels.hpp"

namespace genmine::kernels {

namespace {

constexpr KernelTable kScalar{Isa::Scalar, &scalar::dot, &scalar::count_words};
#if defined(GENMINE_HAVE_AVX2)
constexpr KernelTable kAvx2{Isa::Avx2, &avx2::dot, &avx2::count_words};
#endif
#if defined(GENMINE_HAVE_NEON)
constexpr KernelTable kNeon{Isa::Neon, &neon::dot, &neon::count_words};
#endif

const KernelTable& select() {
  const char* forced = std::getenv("GENMINE_SIMD");
  if (forced != nullptr && std::strcmp(forced, "scalar") == 0) return kScalar;
#if defined(GENMINE_HAVE_AVX2)
  if (isa_supported(Isa::Avx2)) return kAvx2;
#endif
#if defined(GENMINE_HAVE_NEON)
  return kNeon;
#endif
  return kScalar;
}

}  // namespace

const char* isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "unknown";
}

bool isa_supported(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return true;
    case Isa::Avx2:
#if defined(GENMINE_HAVE_AVX2)
      __builtin_cpu_init();
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::Neon:
#if defined(GENMINE_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& table_for(Isa isa) {
  if (!isa_supported(isa)) return kScalar;
  switch (isa) {
#if defined(GENMINE_HAVE_AVX2)
    case Isa::Avx2: return kAvx2;
#endif
#if defined(GENMINE_HAVE_NEON)
    case Isa::Neon: return kNeon;
#endif
    default: return kScalar;
  }
}

const KernelTable& active() {
  static const KernelTable& table = select();
  return table;
}

}  // namespace genmine::kernels
