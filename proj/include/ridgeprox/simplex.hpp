#pragma once

#include <cstddef>
#include <vector>

namespace ridgeprox {

/// minimize c.x  subject to  A x <= b,  x >= 0.
///
/// No feasibility phase: either b >= 0, or `shift_column` names a column
/// whose coefficient is -1 in every row, so pivoting it in on the most
/// violated row yields a feasible basis.
struct LinearProgram {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> a;  // row-major rows x cols
  std::vector<double> b;
  std::vector<double> c;
  std::ptrdiff_t shift_column = -1;

  LinearProgram(std::size_t rows, std::size_t cols);
  double& at(std::size_t r, std::size_t col) { return a[r * cols + col]; }
};

enum class LpStatus { optimal, unbounded };

struct LpSolution {
  LpStatus status = LpStatus::optimal;
  double objective = 0.0;
  std::vector<double> x;
  std::size_t pivots = 0;
};

struct SimplexOptions {
  double eps = 1e-11;
  std::size_t max_pivots = 200000;
};

/// Dense tableau simplex with Bland's rule (lowest-index entering column,
/// lowest-index basic variable among tied ratios). Deterministic for a fixed
/// input ordering. Throws Error when no feasible start is available or the
/// pivot cap is hit.
LpSolution solve_bland(const LinearProgram& lp, const SimplexOptions& options = {});

}  // namespace ridgeprox
