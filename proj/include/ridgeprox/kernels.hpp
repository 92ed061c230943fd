#pragma once

// Data-parallel inner loops. Each kernel has a scalar reference and, on x86,
// an AVX2 variant; active() picks one at startup. Variants produce
// bit-identical results (no FMA contraction, same per-lane accumulation order).

#include <cstddef>

namespace ridgeprox::kernels {

struct MinMax {
  double min;
  double max;
};

struct KernelSet {
  const char* name;
  // out[i] = sum_j dir[j] * columns[j*count + i], accumulated in j order.
  void (*project_columns)(const double* columns, std::size_t dim, std::size_t count,
                          const double* dir, double* out);
  // dst[i] -= alpha * src[i]
  void (*eliminate_row)(double* dst, const double* src, double alpha, std::size_t n);
  // n >= 1
  MinMax (*min_max)(const double* values, std::size_t n);
  // max_i |a[i] - b[i]|, 0 for n == 0
  double (*max_abs_diff)(const double* a, const double* b, std::size_t n);
};

const KernelSet& scalar();

/// nullptr when the CPU (or the build) lacks AVX2.
const KernelSet* avx2();

/// AVX2 when available unless RIDGEPROX_SIMD=scalar is set.
const KernelSet& active();

namespace detail {
void project_columns_scalar(const double*, std::size_t, std::size_t, const double*, double*);
void eliminate_row_scalar(double*, const double*, double, std::size_t);
MinMax min_max_scalar(const double*, std::size_t);
double max_abs_diff_scalar(const double*, const double*, std::size_t);

void project_columns_avx2(const double*, std::size_t, std::size_t, const double*, double*);
void eliminate_row_avx2(double*, const double*, double, std::size_t);
MinMax min_max_avx2(const double*, std::size_t);
double max_abs_diff_avx2(const double*, const double*, std::size_t);
}  // namespace detail

}  // namespace ridgeprox::kernels
