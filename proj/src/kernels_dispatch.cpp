#include <cstdlib>
#include <string_view>

#include "ridgeprox/kernels.hpp"

namespace ridgeprox::kernels {

namespace {

constexpr KernelSet kScalar{"scalar", detail::project_columns_scalar, detail::eliminate_row_scalar,
                            detail::min_max_scalar, detail::max_abs_diff_scalar};

#ifdef RIDGEPROX_HAVE_AVX2
constexpr KernelSet kAvx2{"avx2", detail::project_columns_avx2, detail::eliminate_row_avx2,
                          detail::min_max_avx2, detail::max_abs_diff_avx2};

bool cpu_has_avx2() {
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
}
#endif

const KernelSet& select() {
  if (const char* env = std::getenv("RIDGEPROX_SIMD"); env && std::string_view(env) == "scalar") {
    return kScalar;
  }
  if (const KernelSet* v = avx2()) return *v;
  return kScalar;
}

}  // namespace

const KernelSet& scalar() { return kScalar; }

const KernelSet* avx2() {
#ifdef RIDGEPROX_HAVE_AVX2
  static const bool ok = cpu_has_avx2();
  return ok ? &kAvx2 : nullptr;
#else
  return nullptr;
#endif
}

const KernelSet& active() {
  static const KernelSet& chosen = select();
  return chosen;
}

}  // namespace ridgeprox::kernels
