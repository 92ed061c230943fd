#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ridgeprox/approx.hpp"
#include "ridgeprox/geometry.hpp"

namespace ridgeprox {

/// Positive terms c_1, c_2, ... of a divergent series.
struct SeriesSpec {
  enum class Kind { harmonic, custom };

  Kind kind = Kind::harmonic;
  std::string name = "harmonic";
  std::function<double(std::size_t)> rule;

  static SeriesSpec harmonic();
  static SeriesSpec unit();
  static SeriesSpec power(double p);  // c_n = n^-p, 0 < p <= 1
  /// "harmonic", "unit" or "power:P".
  static SeriesSpec parse(const std::string& text);

  /// c_n for n >= 1; throws if the rule yields a non-positive term.
  [[nodiscard]] double term(std::size_t n) const;
};

/// Continuous piecewise-linear function, constant outside its knot range.
class PiecewiseLinear {
 public:
  PiecewiseLinear(std::vector<double> knots, std::vector<double> values);

  [[nodiscard]] double operator()(double t) const;
  [[nodiscard]] const std::vector<double>& knots() const { return knots_; }
  [[nodiscard]] const std::vector<double>& values() const { return values_; }

 private:
  std::vector<double> knots_;
  std::vector<double> values_;
};

/// Knots 2^-k, ..., 1/2, 1 with values 0, ..., k; 0 below 2^-k and k above 1.
PiecewiseLinear staircase_function(std::size_t k);

struct Instance {
  PointSet points;
  ScalarField field;
};

/// First n points of the infinite path x0 = (2, 2/3), x1 = (2/3, -2/3),
/// x2 = (0, 0), x3 = (1, 1), x_{3+j} = x_{2+j} + 2^-j (1, (-1)^j), with
/// a1 = (1, -1), a2 = (1, 1). The field is 0 at even points and c_1, c_2, ...
/// at odd points. Exact coordinates.
Instance build_section1(std::size_t n, const SeriesSpec& series = SeriesSpec::harmonic());

struct DivergenceRow {
  std::size_t k = 0;
  double partial_sum = 0.0;    // c_1 + ... + c_{k+1}
  double g2_span = 0.0;        // v(a2-class of x_{2k+1}) - v(a2-class of x_0)
  double minimax_error = 0.0;  // best error on the first 2k+2 points
};

/// Interpolates the field along the whole truncated path and tabulates the
/// forced growth of g2 against the series partial sums, for every k with 2k+1 < n.
std::vector<DivergenceRow> verify_g2_divergence(std::size_t n, const SeriesSpec& series = SeriesSpec::harmonic());

/// The path (1,0), (0,1), (1/2,0), (0,1/2), ..., (0,2^-k) followed by the
/// nodes of an extra_grid x extra_grid grid on [0,1]^2 (none when 0), with
/// a1 = (1,1), a2 = (1,1/2) and field staircase_function(k)(a1.x).
Instance build_unit_square_instance(std::size_t k, std::size_t extra_grid = 0);

struct SquareCheck {
  std::size_t k = 0;
  VariationReport report;
  bool lhs_is_k = false;
  bool rhs_at_most_one = false;
  bool ratio_at_least_k = false;
  std::vector<std::string> diagnostics;

  [[nodiscard]] bool ok() const { return lhs_is_k && rhs_at_most_one && ratio_at_least_k; }
};

SquareCheck verify_square_ratio(std::size_t k, std::size_t extra_grid = 0);

enum class ExampleSet { ball, cube, prism };

ExampleSet parse_example_set(const std::string& text);

struct ExampleOptions {
  std::vector<ExactVector> forced;  // always included
  ExactVector ball_dir1{1, 0, 0};
  ExactVector ball_dir2{0, 1, 0};
  // Add (7/4, 0, 0) to the prism sample.
  bool prism_probe = true;
};

/// True when (x, y) lies in the closed union of the triangles
/// (0,0),(1,2),(2,0) and (3/2,1),(5/2,-1),(7/2,1).
bool in_prism_base(const Rational& x, const Rational& y);

/// Uniform samples with `density` nodes per axis:
///  ball  - grid on [-1,1]^3 kept inside the unit ball, orthogonal directions;
///  cube  - lattice in (x+y, x-y, z) with step 1/(density-1) covering [0,1]^3,
///          a1 = (1,1,0), a2 = (1,-1,0);
///  prism - grid on [0,7/2] x [-1,2] x [0,1] kept over the two triangles,
///          a1 = (0,1,0), a2 = (1,0,0).
PointSet build_example_set(ExampleSet which, std::size_t density, const ExampleOptions& options = {});

}  // namespace ridgeprox
