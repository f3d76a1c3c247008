#include <cstdlib>
#include <string_view>

#include "polc/simd/kernels.hpp"
#include "kernels_internal.hpp"

namespace polc::simd {

const KernelTable* avx2_kernels() {
#if defined(__x86_64__) || defined(__i386__)
  static const bool cpu_has_avx2 = __builtin_cpu_supports("avx2");
  if (!cpu_has_avx2) return nullptr;
  return avx2_table_if_compiled();
#else
  return nullptr;
#endif
}

const KernelTable& kernels() {
  static const KernelTable& chosen = []() -> const KernelTable& {
    const char* env = std::getenv("POLC_SIMD");
    if (env && std::string_view(env) == "scalar") return scalar_kernels();
    if (const KernelTable* t = avx2_kernels()) return *t;
    return scalar_kernels();
  }();
  return chosen;
}

}  // namespace polc::simd
