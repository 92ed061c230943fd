#include "ridgeprox/simplex.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "ridgeprox/error.hpp"
#include "ridgeprox/kernels.hpp"

namespace ridgeprox {

LinearProgram::LinearProgram(std::size_t r, std::size_t c)
    : rows(r), cols(c), a(r * c, 0.0), b(r, 0.0), c(c, 0.0) {}

namespace {

// Tableau over structural columns then slacks, with the rhs in the last
// column and reduced costs in the last row.
class Tableau {
 public:
  explicit Tableau(const LinearProgram& lp)
      : m_(lp.rows), n_(lp.cols + lp.rows), width_(n_ + 1), cells_((m_ + 1) * width_, 0.0), basis_(m_) {
    for (std::size_t r = 0; r < m_; ++r) {
      for (std::size_t j = 0; j < lp.cols; ++j) at(r, j) = lp.a[r * lp.cols + j];
      at(r, lp.cols + r) = 1.0;
      at(r, n_) = lp.b[r];
      basis_[r] = lp.cols + r;
    }
    for (std::size_t j = 0; j < lp.cols; ++j) at(m_, j) = lp.c[j];
  }

  double& at(std::size_t r, std::size_t j) { return cells_[r * width_ + j]; }
  double at(std::size_t r, std::size_t j) const { return cells_[r * width_ + j]; }
  double* row(std::size_t r) { return cells_.data() + r * width_; }

  void pivot(std::size_t pr, std::size_t pc) {
    const auto& k = kernels::active();
    const double inv = 1.0 / at(pr, pc);
    double* prow = row(pr);
    for (std::size_t j = 0; j < width_; ++j) prow[j] *= inv;
    prow[pc] = 1.0;
    for (std::size_t r = 0; r <= m_; ++r) {
      if (r == pr) continue;
      const double factor = at(r, pc);
      if (factor == 0.0) continue;
      k.eliminate_row(row(r), prow, factor, width_);
      at(r, pc) = 0.0;
    }
    basis_[pr] = pc;
  }

  std::size_t m_;
  std::size_t n_;
  std::size_t width_;
  std::vector<double> cells_;
  std::vector<std::size_t> basis_;
};

}  // namespace

LpSolution solve_bland(const LinearProgram& lp, const SimplexOptions& options) {
  if (lp.a.size() != lp.rows * lp.cols || lp.b.size() != lp.rows || lp.c.size() != lp.cols) {
    throw Error("linear program has inconsistent dimensions");
  }
  Tableau t(lp);
  LpSolution sol;
  const double eps = options.eps;

  std::size_t worst = 0;
  for (std::size_t r = 1; r < lp.rows; ++r) {
    if (lp.b[r] < lp.b[worst]) worst = r;
  }
  if (lp.rows > 0 && lp.b[worst] < 0) {
    if (lp.shift_column < 0) throw Error("infeasible start: negative right-hand side and no shift column");
    const auto sc = static_cast<std::size_t>(lp.shift_column);
    for (std::size_t r = 0; r < lp.rows; ++r) {
      if (lp.a[r * lp.cols + sc] != -1.0) throw Error("shift column must have coefficient -1 in every row");
    }
    t.pivot(worst, sc);
    ++sol.pivots;
  }

  for (;;) {
    std::size_t enter = t.n_;
    for (std::size_t j = 0; j < t.n_; ++j) {
      if (t.at(t.m_, j) < -eps) {
        enter = j;
        break;
      }
    }
    if (enter == t.n_) break;

    std::size_t leave = t.m_;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < t.m_; ++r) {
      const double coef = t.at(r, enter);
      if (coef <= eps) continue;
      const double ratio = std::max(0.0, t.at(r, t.n_)) / coef;
      if (leave == t.m_) {
        leave = r;
        best_ratio = ratio;
        continue;
      }
      const double tie = eps * std::max(1.0, best_ratio);
      if (ratio < best_ratio - tie) {
        leave = r;
        best_ratio = ratio;
      } else if (ratio <= best_ratio + tie && t.basis_[r] < t.basis_[leave]) {
        leave = r;
      }
    }
    if (leave == t.m_) {
      sol.status = LpStatus::unbounded;
      return sol;
    }
    if (++sol.pivots > options.max_pivots) {
      throw Error("simplex pivot limit of " + std::to_string(options.max_pivots) + " reached");
    }
    t.pivot(leave, enter);
  }

  sol.x.assign(lp.cols, 0.0);
  for (std::size_t r = 0; r < t.m_; ++r) {
    if (t.basis_[r] < lp.cols) sol.x[t.basis_[r]] = std::max(0.0, t.at(r, t.n_));
  }
  double obj = 0;
  for (std::size_t j = 0; j < lp.cols; ++j) obj += lp.c[j] * sol.x[j];
  sol.objective = obj;
  return sol;
}

}  // namespace ridgeprox
