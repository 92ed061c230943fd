#include "ridgeprox/repro.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "ridgeprox/paths.hpp"

namespace ridgeprox {

namespace {

Rational pow2_inv(std::size_t e) {
  boost::multiprecision::cpp_int den = 1;
  den <<= static_cast<unsigned>(e);
  return Rational(1, den);
}

void add_unique(std::vector<ExactVector>& pts, std::set<ExactVector>& seen, ExactVector p) {
  if (seen.insert(p).second) pts.push_back(std::move(p));
}

}  // namespace

SeriesSpec SeriesSpec::harmonic() {
  return {Kind::harmonic, "harmonic", [](std::size_t n) { return 1.0 / static_cast<double>(n); }};
}

SeriesSpec SeriesSpec::unit() {
  return {Kind::custom, "unit", [](std::size_t) { return 1.0; }};
}

SeriesSpec SeriesSpec::power(double p) {
  if (!(p > 0 && p <= 1)) throw Error("power series exponent must lie in (0, 1] for divergence");
  return {Kind::custom, "power:" + std::to_string(p),
          [p](std::size_t n) { return std::pow(static_cast<double>(n), -p); }};
}

SeriesSpec SeriesSpec::parse(const std::string& text) {
  if (text == "harmonic") return harmonic();
  if (text == "unit") return unit();
  if (text.starts_with("power:")) {
    try {
      std::size_t used = 0;
      const double p = std::stod(text.substr(6), &used);
      if (used == text.size() - 6) return power(p);
    } catch (const std::logic_error&) {
    }
  }
  throw Error("unknown series '" + text + "' (expected harmonic, unit or power:P)");
}

double SeriesSpec::term(std::size_t n) const {
  if (n == 0) throw Error("series terms are indexed from 1");
  const double c = rule(n);
  if (!(c > 0) || !std::isfinite(c)) throw Error("series term c_" + std::to_string(n) + " is not positive");
  return c;
}

PiecewiseLinear::PiecewiseLinear(std::vector<double> knots, std::vector<double> values)
    : knots_(std::move(knots)), values_(std::move(values)) {
  if (knots_.empty() || knots_.size() != values_.size()) throw Error("piecewise-linear needs matching knots and values");
  for (std::size_t i = 1; i < knots_.size(); ++i) {
    if (!(knots_[i] > knots_[i - 1])) throw Error("piecewise-linear knots must increase strictly");
  }
}

double PiecewiseLinear::operator()(double t) const {
  if (t <= knots_.front()) return values_.front();
  if (t >= knots_.back()) return values_.back();
  const auto hi = static_cast<std::size_t>(std::upper_bound(knots_.begin(), knots_.end(), t) - knots_.begin());
  const std::size_t lo = hi - 1;
  if (t == knots_[lo]) return values_[lo];
  const double w = (t - knots_[lo]) / (knots_[hi] - knots_[lo]);
  return values_[lo] + w * (values_[hi] - values_[lo]);
}

PiecewiseLinear staircase_function(std::size_t k) {
  if (k == 0) throw Error("k must be at least 1");
  std::vector<double> knots, values;
  for (std::size_t i = 0; i <= k; ++i) {
    knots.push_back(std::ldexp(1.0, -static_cast<int>(k - i)));
    values.push_back(static_cast<double>(i));
  }
  return PiecewiseLinear(std::move(knots), std::move(values));
}

Instance build_section1(std::size_t n, const SeriesSpec& series) {
  if (n < 3) throw Error("the truncated path needs at least 3 points");
  std::vector<ExactVector> pts{{Rational(2), Rational(2, 3)}, {Rational(2, 3), Rational(-2, 3)}, {0, 0}, {1, 1}};
  for (std::size_t j = 1; pts.size() < n; ++j) {
    const Rational step = pow2_inv(j);
    const ExactVector& prev = pts.back();
    pts.push_back({prev[0] + step, prev[1] + (j % 2 == 0 ? step : Rational(-step))});
  }
  pts.resize(n);

  // The closed form above must reproduce the alternating path structure.
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const auto& a = pts[i];
    const auto& b = pts[i + 1];
    const bool ok = (i % 2 == 0) ? (a[0] - a[1] == b[0] - b[1]) : (a[0] + a[1] == b[0] + b[1]);
    if (!ok) throw Error("constructed point " + std::to_string(i + 1) + " breaks the alternating pattern");
  }

  ScalarField f(n, 0.0);
  for (std::size_t i = 1; i < n; i += 2) f[i] = series.term((i + 1) / 2);
  return {PointSet::exact(std::move(pts), {1, -1}, {1, 1}), std::move(f)};
}

std::vector<DivergenceRow> verify_g2_divergence(std::size_t n, const SeriesSpec& series) {
  if (n < 3 || n % 2 == 0) throw Error("the truncation length must be odd and at least 3");
  const Instance inst = build_section1(n, series);
  const PathGraph graph(inst.points);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  const Path path = graph.validate(order);
  const RidgeSum g = interpolate_on_path(inst.points, path, inst.field);
  const auto& second = graph.fibers(StepKind::perp_a2);

  FitOptions fit;
  fit.attach_certificate = false;
  std::vector<DivergenceRow> rows;
  double partial = 0.0;
  for (std::size_t k = 0; 2 * k + 1 < n; ++k) {
    DivergenceRow row;
    row.k = k;
    partial += series.term(k + 1);
    row.partial_sum = partial;
    row.g2_span = g.v[second.class_of[2 * k + 1]] - g.v[second.class_of[0]];
    const std::vector<std::size_t> prefix(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(2 * k + 2));
    const PointSet truncated = inst.points.subset(prefix);
    const ScalarField f(inst.field.begin(), inst.field.begin() + static_cast<std::ptrdiff_t>(2 * k + 2));
    row.minimax_error = minimax_fit(truncated, f, fit).error;
    rows.push_back(row);
  }
  return rows;
}

Instance build_unit_square_instance(std::size_t k, std::size_t extra_grid) {
  if (k == 0) throw Error("k must be at least 1");
  if (extra_grid == 1) throw Error("extra grid must be 0 or at least 2 nodes per axis");
  std::vector<ExactVector> pts;
  std::set<ExactVector> seen;
  for (std::size_t m = 0; m <= k; ++m) {
    add_unique(pts, seen, {pow2_inv(m), Rational(0)});
    add_unique(pts, seen, {Rational(0), pow2_inv(m)});
  }
  for (std::size_t i = 0; i < extra_grid; ++i) {
    for (std::size_t j = 0; j < extra_grid; ++j) {
      const auto den = static_cast<long>(extra_grid - 1);
      add_unique(pts, seen, {Rational(static_cast<long>(i), den), Rational(static_cast<long>(j), den)});
    }
  }
  const PiecewiseLinear g = staircase_function(k);
  ScalarField f;
  f.reserve(pts.size());
  for (const auto& p : pts) f.push_back(g((p[0] + p[1]).convert_to<double>()));
  return {PointSet::exact(std::move(pts), {1, 1}, {1, Rational(1, 2)}), std::move(f)};
}

SquareCheck verify_square_ratio(std::size_t k, std::size_t extra_grid) {
  const Instance inst = build_unit_square_instance(k, extra_grid);
  SquareCheck check;
  check.k = k;
  check.report = variation_inequality_report(inst.points, inst.field);
  const double kk = static_cast<double>(k);
  check.lhs_is_k = check.report.lhs == kk;
  check.rhs_at_most_one = check.report.rhs <= 1.0 + 1e-12;
  check.ratio_at_least_k = check.report.ratio >= kk;
  if (!check.lhs_is_k) {
    check.diagnostics.push_back("orbit variation " + std::to_string(check.report.lhs) + " differs from k = " +
                                std::to_string(k));
  }
  if (!check.rhs_at_most_one) {
    check.diagnostics.push_back("fiber variation " + std::to_string(check.report.rhs) + " exceeds 1");
  }
  if (!check.ratio_at_least_k) {
    check.diagnostics.push_back("ratio " + std::to_string(check.report.ratio) + " is below k = " + std::to_string(k));
  }
  return check;
}

ExampleSet parse_example_set(const std::string& text) {
  if (text == "a" || text == "ball") return ExampleSet::ball;
  if (text == "b" || text == "cube") return ExampleSet::cube;
  if (text == "c" || text == "prism") return ExampleSet::prism;
  throw Error("unknown example set '" + text + "' (expected a, b or c)");
}

bool in_prism_base(const Rational& x, const Rational& y) {
  auto inside = [&](const Rational (&t)[3][2]) {
    int sign = 0;
    for (int e = 0; e < 3; ++e) {
      const auto& p = t[e];
      const auto& q = t[(e + 1) % 3];
      const Rational cross = (q[0] - p[0]) * (y - p[1]) - (q[1] - p[1]) * (x - p[0]);
      const int s = cross > 0 ? 1 : (cross < 0 ? -1 : 0);
      if (s == 0) continue;
      if (sign == 0) sign = s;
      if (s != sign) return false;
    }
    return true;
  };
  static const Rational first[3][2] = {{0, 0}, {1, 2}, {2, 0}};
  static const Rational second[3][2] = {{Rational(3, 2), 1}, {Rational(5, 2), -1}, {Rational(7, 2), 1}};
  return inside(first) || inside(second);
}

PointSet build_example_set(ExampleSet which, std::size_t density, const ExampleOptions& options) {
  if (density < 2) throw Error("density must be at least 2");
  const auto steps = static_cast<long>(density - 1);
  std::vector<ExactVector> pts;
  std::set<ExactVector> seen;
  ExactVector dir1, dir2;

  switch (which) {
    case ExampleSet::ball: {
      dir1 = options.ball_dir1;
      dir2 = options.ball_dir2;
      if (dir1.size() != 3 || dir2.size() != 3) throw Error("ball directions must be 3-vectors");
      if (project_exact(dir1, dir2) != 0) throw Error("ball directions must be orthogonal");
      for (long i = 0; i <= steps; ++i) {
        for (long j = 0; j <= steps; ++j) {
          for (long l = 0; l <= steps; ++l) {
            const Rational x = Rational(-1) + Rational(2 * i, steps);
            const Rational y = Rational(-1) + Rational(2 * j, steps);
            const Rational z = Rational(-1) + Rational(2 * l, steps);
            if (x * x + y * y + z * z <= 1) add_unique(pts, seen, {x, y, z});
          }
        }
      }
      break;
    }
    case ExampleSet::cube: {
      dir1 = {1, 1, 0};
      dir2 = {1, -1, 0};
      // s = x + y in [0, 2], d = x - y in [-1, 1], |s - 1| + |d| <= 1.
      for (long i = 0; i <= 2 * steps; ++i) {
        for (long j = -steps; j <= steps; ++j) {
          if (std::labs(i - steps) + std::labs(j) > steps) continue;
          const Rational s(i, steps), d(j, steps);
          for (long l = 0; l <= steps; ++l) add_unique(pts, seen, {(s + d) / 2, (s - d) / 2, Rational(l, steps)});
        }
      }
      break;
    }
    case ExampleSet::prism: {
      dir1 = {0, 1, 0};
      dir2 = {1, 0, 0};
      for (long i = 0; i <= steps; ++i) {
        const Rational x(7 * i, 2 * steps);
        for (long j = 0; j <= steps; ++j) {
          const Rational y = Rational(-1) + Rational(3 * j, steps);
          if (!in_prism_base(x, y)) continue;
          for (long l = 0; l <= steps; ++l) add_unique(pts, seen, {x, y, Rational(l, steps)});
        }
      }
      if (options.prism_probe) add_unique(pts, seen, {Rational(7, 4), 0, 0});
      break;
    }
  }
  for (const auto& p : options.forced) {
    if (p.size() != 3) throw Error("forced points must be 3-vectors");
    add_unique(pts, seen, p);
  }
  return PointSet::exact(std::move(pts), std::move(dir1), std::move(dir2));
}

}  // namespace ridgeprox
