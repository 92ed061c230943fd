#include "ridgeprox/approx.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "ridgeprox/kernels.hpp"

namespace ridgeprox {

namespace {

void check_field(const PointSet& ps, const ScalarField& f) {
  if (f.size() != ps.size()) {
    throw Error("field has " + std::to_string(f.size()) + " values for " + std::to_string(ps.size()) + " points");
  }
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!std::isfinite(f[i])) throw Error("field value " + std::to_string(i) + " is not finite");
  }
}

double sup_residual(const ScalarField& f, const ScalarField& fitted) {
  return kernels::active().max_abs_diff(f.data(), fitted.data(), f.size());
}

std::optional<ClosedPathCertificate> best_certificate(const PointSet& ps, const PathGraph& graph, const ScalarField& f,
                                                      const FitOptions& options) {
  if (ps.size() > options.limits.max_set_points) return std::nullopt;
  const std::size_t cap = std::min(options.max_closed_points, options.limits.max_path_points) / 2 * 2;
  if (cap < 2) return std::nullopt;
  std::optional<ClosedPathCertificate> best;
  for (const auto& path : graph.closed_paths(cap, options.limits)) {
    auto cert = closed_path_functional(ps, f, path);
    if (!best || cert.functional_value > best->functional_value) best = std::move(cert);
  }
  return best;
}

}  // namespace

double evaluate_at(const RidgeSum& g, const PathGraph& graph, std::size_t point) {
  return g.u[graph.fibers(StepKind::perp_a1).class_of[point]] + g.v[graph.fibers(StepKind::perp_a2).class_of[point]];
}

ScalarField evaluate(const RidgeSum& g, const PathGraph& graph) {
  if (g.u.size() != graph.fibers(StepKind::perp_a1).size() || g.v.size() != graph.fibers(StepKind::perp_a2).size()) {
    throw Error("ridge sum tables do not match the fiber partitions");
  }
  ScalarField out(graph.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = evaluate_at(g, graph, i);
  return out;
}

ApproxResult minimax_fit(const PointSet& ps, const ScalarField& f, const FitOptions& options) {
  check_field(ps, f);
  const PathGraph graph(ps);
  const auto& f1 = graph.fibers(StepKind::perp_a1);
  const auto& f2 = graph.fibers(StepKind::perp_a2);
  const std::size_t p = f1.size();
  const std::size_t q = f2.size();

  // Columns: (u+, u-) for a1-classes 1..p-1, (v+, v-) for a2-classes, then e.
  const std::size_t u_cols = 2 * (p - 1);
  const std::size_t e_col = u_cols + 2 * q;
  LinearProgram lp(2 * ps.size(), e_col + 1);
  lp.c[e_col] = 1.0;
  lp.shift_column = static_cast<std::ptrdiff_t>(e_col);
  for (std::size_t k = 0; k < ps.size(); ++k) {
    const std::size_t i = f1.class_of[k];
    const std::size_t j = f2.class_of[k];
    const std::size_t lo = 2 * k, hi = 2 * k + 1;
    // f - u - v <= e   and   u + v - f <= e
    if (i > 0) {
      lp.at(lo, 2 * (i - 1)) = -1.0;
      lp.at(lo, 2 * (i - 1) + 1) = 1.0;
      lp.at(hi, 2 * (i - 1)) = 1.0;
      lp.at(hi, 2 * (i - 1) + 1) = -1.0;
    }
    lp.at(lo, u_cols + 2 * j) = -1.0;
    lp.at(lo, u_cols + 2 * j + 1) = 1.0;
    lp.at(hi, u_cols + 2 * j) = 1.0;
    lp.at(hi, u_cols + 2 * j + 1) = -1.0;
    lp.at(lo, e_col) = -1.0;
    lp.at(hi, e_col) = -1.0;
    lp.b[lo] = -f[k];
    lp.b[hi] = f[k];
  }

  const LpSolution sol = solve_bland(lp, options.simplex);
  if (sol.status != LpStatus::optimal) throw Error("minimax linear program reported unbounded");

  ApproxResult result;
  result.iterations = sol.pivots;
  result.ridge_sum.u.assign(p, 0.0);
  result.ridge_sum.v.assign(q, 0.0);
  for (std::size_t i = 1; i < p; ++i) result.ridge_sum.u[i] = sol.x[2 * (i - 1)] - sol.x[2 * (i - 1) + 1];
  for (std::size_t j = 0; j < q; ++j) result.ridge_sum.v[j] = sol.x[u_cols + 2 * j] - sol.x[u_cols + 2 * j + 1];
  result.error = sup_residual(f, evaluate(result.ridge_sum, graph));

  if (options.attach_certificate) {
    auto cert = best_certificate(ps, graph, f, options);
    if (cert && std::fabs(cert->functional_value - result.error) <= options.certificate_match) {
      result.certificate = std::move(cert);
    }
  }
  return result;
}

RidgeSum interpolate_on_path(const PointSet& ps, const Path& path, const ScalarField& f) {
  check_field(ps, f);
  const PathGraph graph(ps);
  Path walk;
  if (path.points.size() > 1 && path.steps.size() + 1 == path.points.size()) {
    auto typed = graph.try_path(path.points, path.steps.front());
    if (!typed || typed->steps != path.steps) throw Error("path step kinds are inconsistent with the point set");
    walk = *std::move(typed);
  } else {
    walk = graph.validate(path.points);
  }

  const auto& f1 = graph.fibers(StepKind::perp_a1);
  const auto& f2 = graph.fibers(StepKind::perp_a2);
  RidgeSum g{std::vector<double>(f1.size(), 0.0), std::vector<double>(f2.size(), 0.0)};
  std::vector<bool> u_set(f1.size(), false), v_set(f2.size(), false);

  double scale = 1.0;
  for (std::size_t idx : walk.points) scale = std::max(scale, std::fabs(f[idx]));
  const double tol = 1e-9 * scale;

  // The cycle behind the walk, whether given open or with its first point repeated at the end.
  std::optional<Path> cycle;
  if (walk.points.size() > 2 && walk.points.front() == walk.points.back()) {
    cycle = graph.as_closed(std::span(walk.points).first(walk.points.size() - 1));
  } else {
    cycle = graph.as_closed(walk.points);
  }

  auto conflict = [&](std::size_t at) {
    std::ostringstream msg;
    msg << "no exact interpolant: path forces two values on one fiber at point " << walk.points[at];
    if (cycle) msg << "; closed path with alternating sum " << closed_path_functional(ps, f, *cycle).alternating_sum;
    throw Error(msg.str());
  };
  auto assign = [&](std::vector<double>& table, std::vector<bool>& set, std::size_t cls, double value, std::size_t at) {
    if (set[cls]) {
      if (std::fabs(table[cls] - value) > tol) conflict(at);
      return;
    }
    table[cls] = value;
    set[cls] = true;
  };

  const std::size_t x0 = walk.points.front();
  assign(g.u, u_set, f1.class_of[x0], 0.0, 0);
  assign(g.v, v_set, f2.class_of[x0], f[x0], 0);
  for (std::size_t s = 0; s < walk.steps.size(); ++s) {
    const std::size_t a = walk.points[s];
    const std::size_t b = walk.points[s + 1];
    if (walk.steps[s] == StepKind::perp_a1) {
      const double uval = g.u[f1.class_of[a]];
      assign(g.u, u_set, f1.class_of[b], uval, s + 1);
      assign(g.v, v_set, f2.class_of[b], g.v[f2.class_of[a]] + f[b] - f[a], s + 1);
    } else {
      const double vval = g.v[f2.class_of[a]];
      assign(g.v, v_set, f2.class_of[b], vval, s + 1);
      assign(g.u, u_set, f1.class_of[b], g.u[f1.class_of[a]] + f[b] - f[a], s + 1);
    }
  }
  // A closed path revisits its first fiber through the closing step.
  if (cycle) {
    const auto cert = closed_path_functional(ps, f, *cycle);
    if (std::fabs(cert.alternating_sum) > tol) {
      std::ostringstream msg;
      msg << "no exact interpolant: closed path with alternating sum " << cert.alternating_sum;
      throw Error(msg.str());
    }
  }
  return g;
}

ClosedPathCertificate closed_path_functional(const PointSet& ps, const ScalarField& f, const Path& path) {
  check_field(ps, f);
  const PathGraph graph(ps);
  auto closed = graph.as_closed(path.points);
  if (!closed) throw Error("path is not closed");
  ClosedPathCertificate cert;
  cert.path = *std::move(closed);
  double sum = 0.0;
  for (std::size_t k = 0; k < cert.path.points.size(); ++k) {
    const double value = f[cert.path.points[k]];
    sum += (k % 2 == 0) ? value : -value;
  }
  cert.alternating_sum = sum;
  cert.functional_value = std::fabs(sum) / static_cast<double>(cert.path.points.size());
  return cert;
}

ApproxResult alternating_algorithm(const PointSet& ps, const ScalarField& f, std::size_t max_rounds, double stop_tol) {
  check_field(ps, f);
  const PathGraph graph(ps);
  const auto& k = kernels::active();
  ScalarField residual = f;
  RidgeSum g{std::vector<double>(graph.fibers(StepKind::perp_a1).size(), 0.0),
             std::vector<double>(graph.fibers(StepKind::perp_a2).size(), 0.0)};
  const ScalarField zero(f.size(), 0.0);
  std::vector<double> gathered;

  auto center = [&](const FiberPartition& part, std::vector<double>& table) {
    for (std::size_t c = 0; c < part.size(); ++c) {
      const auto& members = part.classes[c];
      gathered.resize(members.size());
      for (std::size_t m = 0; m < members.size(); ++m) gathered[m] = residual[members[m]];
      const auto mm = k.min_max(gathered.data(), gathered.size());
      const double mid = 0.5 * (mm.min + mm.max);
      table[c] += mid;
      for (std::size_t idx : members) residual[idx] -= mid;
    }
  };

  ApproxResult result;
  double err = k.max_abs_diff(residual.data(), zero.data(), residual.size());
  for (std::size_t round = 0; round < max_rounds; ++round) {
    center(graph.fibers(StepKind::perp_a1), g.u);
    center(graph.fibers(StepKind::perp_a2), g.v);
    ++result.iterations;
    const double next = k.max_abs_diff(residual.data(), zero.data(), residual.size());
    const double decrease = err - next;
    err = std::min(err, next);
    if (decrease <= stop_tol) break;
  }

  const double shift = g.u.front();
  for (double& x : g.u) x -= shift;
  for (double& x : g.v) x += shift;
  result.ridge_sum = std::move(g);
  result.error = sup_residual(f, evaluate(result.ridge_sum, graph));
  return result;
}

double variation(const ScalarField& f, std::span<const std::size_t> subset) {
  if (subset.empty()) throw Error("variation over an empty set");
  std::vector<double> values;
  values.reserve(subset.size());
  for (std::size_t idx : subset) {
    if (idx >= f.size()) throw Error("index " + std::to_string(idx) + " outside the field");
    values.push_back(f[idx]);
  }
  const auto mm = kernels::active().min_max(values.data(), values.size());
  return mm.max - mm.min;
}

bool constant_on_fibers(const PointSet& ps, const ScalarField& f, int which) {
  check_field(ps, f);
  const FiberPartition part = fibers(ps, which);
  for (const auto& cls : part.classes) {
    double lo = f[cls[0]], hi = f[cls[0]];
    for (std::size_t idx : cls) {
      lo = std::min(lo, f[idx]);
      hi = std::max(hi, f[idx]);
    }
    if (!ps.tol().equal(lo, hi)) return false;
  }
  return true;
}

VariationReport variation_inequality_report(const PointSet& ps, const ScalarField& f) {
  if (!constant_on_fibers(ps, f, 1)) throw Error("field is not constant on the a1-fibers");
  const PathGraph graph(ps);
  VariationReport report;
  for (const auto& orbit : graph.orbits().classes) report.lhs = std::max(report.lhs, variation(f, orbit));
  for (const auto& fiber : graph.fibers(StepKind::perp_a2).classes) report.rhs = std::max(report.rhs, variation(f, fiber));
  if (report.rhs > 0) {
    report.ratio = report.lhs / report.rhs;
  } else {
    report.ratio = report.lhs > 0 ? std::numeric_limits<double>::infinity() : 0.0;
  }
  return report;
}

}  // namespace ridgeprox
