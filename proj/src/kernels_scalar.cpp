#include <cmath>

#include "ridgeprox/kernels.hpp"

namespace ridgeprox::kernels::detail {

void project_columns_scalar(const double* columns, std::size_t dim, std::size_t count,
                            const double* dir, double* out) {
  for (std::size_t i = 0; i < count; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < dim; ++j) {
      acc = acc + dir[j] * columns[j * count + i];
    }
    out[i] = acc;
  }
}

void eliminate_row_scalar(double* dst, const double* src, double alpha, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    dst[i] = dst[i] - alpha * src[i];
  }
}

MinMax min_max_scalar(const double* values, std::size_t n) {
  MinMax r{values[0], values[0]};
  for (std::size_t i = 1; i < n; ++i) {
    if (values[i] < r.min) r.min = values[i];
    if (values[i] > r.max) r.max = values[i];
  }
  return r;
}

double max_abs_diff_scalar(const double* a, const double* b, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = std::fabs(a[i] - b[i]);
    if (d > m) m = d;
  }
  return m;
}

}  // namespace ridgeprox::kernels::detail
