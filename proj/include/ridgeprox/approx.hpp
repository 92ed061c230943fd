#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "ridgeprox/geometry.hpp"
#include "ridgeprox/paths.hpp"
#include "ridgeprox/simplex.hpp"

namespace ridgeprox {

/// One real value per point of the associated PointSet.
using ScalarField = std::vector<double>;

/// g1(a1.x) + g2(a2.x) tabulated on the fibers: u per a1-class, v per a2-class.
struct RidgeSum {
  std::vector<double> u;
  std::vector<double> v;
};

double evaluate_at(const RidgeSum& g, const PathGraph& graph, std::size_t point);
ScalarField evaluate(const RidgeSum& g, const PathGraph& graph);

struct ClosedPathCertificate {
  Path path;
  double alternating_sum = 0.0;
  double functional_value = 0.0;  // |alternating_sum| / length
};

struct ApproxResult {
  double error = 0.0;
  RidgeSum ridge_sum;
  std::optional<ClosedPathCertificate> certificate;
  std::size_t iterations = 0;  // simplex pivots or alternating rounds
};

struct FitOptions {
  bool attach_certificate = true;
  std::size_t max_closed_points = 12;
  ClosedPathLimits limits;
  SimplexOptions simplex;
  // Certificate is attached only when it matches the optimum this closely.
  double certificate_match = 1e-7;
};

/// Exact sup-norm best approximation of f by ridge sums on the finite set,
/// via min e s.t. |f(x) - u[i(x)] - v[j(x)]| <= e. The first u-class is pinned to 0.
ApproxResult minimax_fit(const PointSet& ps, const ScalarField& f, const FitOptions& options = {});

/// Telescopes f along an open path: u = 0 on the first a1-class met, then each
/// perp_a1 step updates v and each perp_a2 step updates u. Classes the path
/// never meets are 0. Throws when the path forces two different values on one
/// class (a closed path with nonzero alternating sum in particular).
RidgeSum interpolate_on_path(const PointSet& ps, const Path& path, const ScalarField& f);

/// Signed sum f(x1) - f(x2) + f(x3) - ... over a closed path, and its |.|/m.
/// Any ridge sum has zero alternating sum, so functional_value bounds the minimax error from below.
ClosedPathCertificate closed_path_functional(const PointSet& ps, const ScalarField& f, const Path& path);

/// Alternating fiber-wise Chebyshev centering (first a1-fibers, then a2-fibers
/// per round). Stops when one round lowers the sup-norm residual by at most
/// stop_tol, or after max_rounds. The result is an upper bound on the optimum.
ApproxResult alternating_algorithm(const PointSet& ps, const ScalarField& f, std::size_t max_rounds, double stop_tol);

/// max - min of f over a nonempty subset.
double variation(const ScalarField& f, std::span<const std::size_t> subset);

/// Both sides of the orbit/fiber variation inequality for a field constant on a1-fibers.
struct VariationReport {
  double lhs = 0.0;    // max over orbits of the variation
  double rhs = 0.0;    // max over a2-fibers of the variation
  double ratio = 0.0;  // lhs / rhs; 0 for 0/0, +inf for x/0 with x > 0
};

/// True when f is constant (under the set's tolerance) on every fiber of direction `which`.
bool constant_on_fibers(const PointSet& ps, const ScalarField& f, int which);

VariationReport variation_inequality_report(const PointSet& ps, const ScalarField& f);

}  // namespace ridgeprox
