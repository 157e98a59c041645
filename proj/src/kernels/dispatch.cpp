#include "rpca/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace rpca::kernels {

#if defined(RPCA_HAVE_AVX2)
const KernelTable& avx2_table();
#endif

const KernelTable* avx2() {
#if defined(RPCA_HAVE_AVX2)
  static const bool supported = [] {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") != 0;
  }();
  return supported ? &avx2_table() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& active() {
  static const KernelTable* table = [] {
    const char* forced = std::getenv("RPCA_KERNELS");
    if (forced != nullptr && std::strcmp(forced, "scalar") == 0) return &scalar();
    const KernelTable* simd = avx2();
    return simd != nullptr ? simd : &scalar();
  }();
  return *table;
}

}  // namespace rpca::kernels
