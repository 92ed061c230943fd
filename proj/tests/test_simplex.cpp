#include <cmath>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "doctest.h"
#include "ridgeprox/error.hpp"
#include "ridgeprox/simplex.hpp"

using namespace ridgeprox;

namespace {

// Minimum of c.x over the polytope by enumerating every vertex: choose `cols`
// tight constraints among the rows and x >= 0, solve, keep feasible points.
std::optional<double> vertex_oracle(const LinearProgram& lp) {
  const std::size_t n = lp.cols;
  const std::size_t m = lp.rows + n;
  auto row = [&](std::size_t r, std::size_t j) -> double {
    if (r < lp.rows) return lp.a[r * n + j];
    return (r - lp.rows) == j ? -1.0 : 0.0;
  };
  auto rhs = [&](std::size_t r) { return r < lp.rows ? lp.b[r] : 0.0; };
  std::optional<double> best;
  std::vector<std::size_t> pick(n);
  std::function<void(std::size_t, std::size_t)> choose = [&](std::size_t start, std::size_t depth) {
    if (depth == n) {
      std::vector<std::vector<double>> a(n, std::vector<double>(n + 1));
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) a[i][j] = row(pick[i], j);
        a[i][n] = rhs(pick[i]);
      }
      for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col; r < n; ++r) {
          if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        }
        if (std::abs(a[piv][col]) < 1e-12) return;
        std::swap(a[piv], a[col]);
        for (std::size_t r = 0; r < n; ++r) {
          if (r == col) continue;
          const double f = a[r][col] / a[col][col];
          for (std::size_t j = col; j <= n; ++j) a[r][j] -= f * a[col][j];
        }
      }
      std::vector<double> x(n);
      for (std::size_t i = 0; i < n; ++i) x[i] = a[i][n] / a[i][i];
      for (std::size_t r = 0; r < m; ++r) {
        double lhs = 0;
        for (std::size_t j = 0; j < n; ++j) lhs += row(r, j) * x[j];
        if (lhs > rhs(r) + 1e-9) return;
      }
      double obj = 0;
      for (std::size_t j = 0; j < n; ++j) obj += lp.c[j] * x[j];
      if (!best || obj < *best) best = obj;
      return;
    }
    for (std::size_t r = start; r < m; ++r) {
      pick[depth] = r;
      choose(r + 1, depth + 1);
    }
  };
  choose(0, 0);
  return best;
}

}  // namespace

TEST_CASE("small textbook problem") {
  // max 3x + 2y s.t. x + y <= 4, x + 3y <= 6, x <= 3
  LinearProgram lp(3, 2);
  lp.at(0, 0) = 1, lp.at(0, 1) = 1, lp.b[0] = 4;
  lp.at(1, 0) = 1, lp.at(1, 1) = 3, lp.b[1] = 6;
  lp.at(2, 0) = 1, lp.b[2] = 3;
  lp.c = {-3, -2};
  const auto s = solve_bland(lp);
  CHECK(s.status == LpStatus::optimal);
  CHECK(s.objective == doctest::Approx(-11));
  CHECK(s.x[0] == doctest::Approx(3));
  CHECK(s.x[1] == doctest::Approx(1));
}

TEST_CASE("unbounded problem") {
  LinearProgram lp(1, 2);
  lp.at(0, 0) = 1, lp.at(0, 1) = -1, lp.b[0] = 1;
  lp.c = {0, -1};
  CHECK(solve_bland(lp).status == LpStatus::unbounded);
}

TEST_CASE("Beale's cycling example terminates under Bland's rule") {
  LinearProgram lp(3, 4);
  const double rows[3][4] = {{0.25, -8, -1, 9}, {0.5, -12, -0.5, 3}, {0, 0, 1, 0}};
  for (std::size_t r = 0; r < 3; ++r) {
    for (std::size_t j = 0; j < 4; ++j) lp.at(r, j) = rows[r][j];
  }
  lp.b = {0, 0, 1};
  lp.c = {-0.75, 20, -0.5, 6};
  const auto s = solve_bland(lp);
  CHECK(s.status == LpStatus::optimal);
  CHECK(s.objective == doctest::Approx(-1.25));
}

TEST_CASE("shift column provides the starting basis") {
  // min e s.t. -e <= -3, -e + y <= -1, -e - y <= 2
  LinearProgram lp(3, 2);
  lp.at(0, 0) = -1, lp.b[0] = -3;
  lp.at(1, 0) = -1, lp.at(1, 1) = 1, lp.b[1] = -1;
  lp.at(2, 0) = -1, lp.at(2, 1) = -1, lp.b[2] = 2;
  lp.c = {1, 0};
  lp.shift_column = 0;
  const auto s = solve_bland(lp);
  CHECK(s.objective == doctest::Approx(3));

  LinearProgram bad(1, 1);
  bad.at(0, 0) = 1;
  bad.b[0] = -1;
  bad.c = {1};
  CHECK_THROWS_AS((void)solve_bland(bad), Error);
}

TEST_CASE("pivot cap is enforced") {
  LinearProgram lp(3, 2);
  lp.at(0, 0) = 1, lp.at(0, 1) = 1, lp.b[0] = 4;
  lp.at(1, 0) = 1, lp.at(1, 1) = 3, lp.b[1] = 6;
  lp.at(2, 0) = 1, lp.b[2] = 3;
  lp.c = {-3, -2};
  SimplexOptions o;
  o.max_pivots = 1;
  CHECK_THROWS_AS((void)solve_bland(lp, o), Error);
}

TEST_CASE("random bounded problems match vertex enumeration") {
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<int> coef(-4, 4);
  std::uniform_int_distribution<int> rhs(0, 6);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial % 3);
    const std::size_t extra = 1 + static_cast<std::size_t>(trial % 4);
    LinearProgram lp(n + extra, n);
    for (std::size_t j = 0; j < n; ++j) {
      lp.at(j, j) = 1;
      lp.b[j] = 5;  // box keeps the problem bounded
      lp.c[j] = coef(rng);
    }
    for (std::size_t r = n; r < n + extra; ++r) {
      for (std::size_t j = 0; j < n; ++j) lp.at(r, j) = coef(rng);
      lp.b[r] = rhs(rng);
    }
    const auto s = solve_bland(lp);
    const auto oracle = vertex_oracle(lp);
    REQUIRE(oracle.has_value());
    REQUIRE(s.status == LpStatus::optimal);
    CHECK(s.objective == doctest::Approx(*oracle).epsilon(1e-9));
    for (std::size_t r = 0; r < lp.rows; ++r) {
      double lhs = 0;
      for (std::size_t j = 0; j < n; ++j) lhs += lp.at(r, j) * s.x[j];
      CHECK(lhs <= lp.b[r] + 1e-9);
    }
    for (double x : s.x) CHECK(x >= -1e-12);
    // Deterministic: the same input gives the same pivot sequence length.
    CHECK(solve_bland(lp).pivots == s.pivots);
  }
}
