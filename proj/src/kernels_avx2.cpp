#include <immintrin.h>

#include <cmath>

#include "ridgeprox/kernels.hpp"

namespace ridgeprox::kernels::detail {

void project_columns_avx2(const double* columns, std::size_t dim, std::size_t count,
                          const double* dir, double* out) {
  std::size_t i = 0;
  for (; i + 4 <= count; i += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t j = 0; j < dim; ++j) {
      const __m256d x = _mm256_loadu_pd(columns + j * count + i);
      acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_set1_pd(dir[j]), x));
    }
    _mm256_storeu_pd(out + i, acc);
  }
  for (; i < count; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
      acc = acc + dir[j] * columns[j * count + i];
    }
    out[i] = acc;
  }
}

void eliminate_row_avx2(double* dst, const double* src, double alpha, std::size_t n) {
  const __m256d a = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_loadu_pd(dst + i);
    const __m256d s = _mm256_loadu_pd(src + i);
    _mm256_storeu_pd(dst + i, _mm256_sub_pd(d, _mm256_mul_pd(a, s)));
  }
  for (; i < n; ++i) {
    dst[i] = dst[i] - alpha * src[i];
  }
}

MinMax min_max_avx2(const double* values, std::size_t n) {
  if (n < 8) return min_max_scalar(values, n);
  __m256d lo = _mm256_loadu_pd(values);
  __m256d hi = lo;
  std::size_t i = 4;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(values + i);
    lo = _mm256_min_pd(lo, v);
    hi = _mm256_max_pd(hi, v);
  }
  alignas(32) double l[4];
  alignas(32) double h[4];
  _mm256_store_pd(l, lo);
  _mm256_store_pd(h, hi);
  MinMax r{l[0], h[0]};
  for (int k = 1; k < 4; ++k) {
    if (l[k] < r.min) r.min = l[k];
    if (h[k] > r.max) r.max = h[k];
  }
  for (; i < n; ++i) {
    if (values[i] < r.min) r.min = values[i];
    if (values[i] > r.max) r.max = values[i];
  }
  return r;
}

double max_abs_diff_avx2(const double* a, const double* b, std::size_t n) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  __m256d m = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    m = _mm256_max_pd(m, _mm256_andnot_pd(sign, d));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, m);
  double r = lanes[0];
  for (int k = 1; k < 4; ++k) {
    if (lanes[k] > r) r = lanes[k];
  }
  for (; i < n; ++i) {
    const double d = std::fabs(a[i] - b[i]);
    if (d > r) r = d;
  }
  return r;
}

}  // namespace ridgeprox::kernels::detail
