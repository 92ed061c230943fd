#pragma once

// Shared generators and brute-force oracles for the test suites. The oracles
// work from exact coordinates and do not reuse library internals.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <vector>

#include "ridgeprox/approx.hpp"
#include "ridgeprox/geometry.hpp"
#include "ridgeprox/paths.hpp"

namespace testing {

using namespace ridgeprox;

inline ExactVector ev(std::initializer_list<Rational> xs) { return ExactVector(xs); }

inline PointSet grid(std::size_t nx, std::size_t ny, ExactVector d1 = {1, 0}, ExactVector d2 = {0, 1}) {
  std::vector<ExactVector> pts;
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < ny; ++j) pts.push_back({Rational(static_cast<long>(i)), Rational(static_cast<long>(j))});
  }
  return PointSet::exact(std::move(pts), std::move(d1), std::move(d2));
}

// Random exact planar set on a coarse lattice, so fibers actually collide.
inline PointSet random_planar_set(std::mt19937_64& rng, std::size_t max_points, long lattice = 4,
                                  std::size_t min_points = 1) {
  static const std::vector<std::pair<ExactVector, ExactVector>> pairs = {
      {{1, 0}, {0, 1}}, {{1, 1}, {1, -1}}, {{1, 2}, {2, -1}}, {{1, 1}, {0, 1}}, {{1, Rational(1, 2)}, {1, 1}}};
  std::uniform_int_distribution<std::size_t> count(min_points, max_points);
  std::uniform_int_distribution<long> coord(0, lattice);
  std::uniform_int_distribution<std::size_t> pick(0, pairs.size() - 1);
  const std::size_t n = count(rng);
  std::vector<ExactVector> pts;
  while (pts.size() < n) {
    ExactVector p{Rational(coord(rng), 2), Rational(coord(rng), 2)};
    if (std::find(pts.begin(), pts.end(), p) == pts.end()) pts.push_back(std::move(p));
  }
  const auto& d = pairs[pick(rng)];
  return PointSet::exact(std::move(pts), d.first, d.second);
}

inline ScalarField random_field(std::mt19937_64& rng, std::size_t n, double scale = 1.0) {
  std::uniform_real_distribution<double> dist(-scale, scale);
  ScalarField f(n);
  for (auto& v : f) v = dist(rng);
  return f;
}

// Exact fiber labels: index of the distinct projection value, in ascending order.
inline std::vector<std::size_t> oracle_fiber_labels(const PointSet& ps, int which) {
  const ExactVector& d = ps.direction(which).exact();
  std::map<Rational, std::size_t> levels;
  std::vector<Rational> proj;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    proj.push_back(project_exact(d, ps.exact_point(i)));
    levels.emplace(proj.back(), 0);
  }
  std::size_t next = 0;
  for (auto& [value, id] : levels) id = next++;
  std::vector<std::size_t> out;
  for (const auto& p : proj) out.push_back(levels.at(p));
  return out;
}

inline ScalarField ridge_field(const PointSet& ps, std::mt19937_64& rng) {
  const auto l1 = oracle_fiber_labels(ps, 1);
  const auto l2 = oracle_fiber_labels(ps, 2);
  const auto u = random_field(rng, ps.size(), 2.0);
  const auto v = random_field(rng, ps.size(), 2.0);
  ScalarField f(ps.size());
  for (std::size_t i = 0; i < ps.size(); ++i) f[i] = u[l1[i]] + v[l2[i]];
  return f;
}

// Minimax error by bisection on e: f - e <= u_i + v_j <= f + e is a system of
// difference constraints in (u, -v), feasible iff it has no negative cycle.
inline double oracle_minimax(const PointSet& ps, const ScalarField& f) {
  const auto l1 = oracle_fiber_labels(ps, 1);
  const auto l2 = oracle_fiber_labels(ps, 2);
  const std::size_t n1 = *std::max_element(l1.begin(), l1.end()) + 1;
  const std::size_t n2 = *std::max_element(l2.begin(), l2.end()) + 1;
  auto feasible = [&](double e) {
    struct Arc {
      std::size_t from, to;
      double w;
    };
    std::vector<Arc> arcs;
    for (std::size_t x = 0; x < ps.size(); ++x) {
      const std::size_t u = l1[x], w = n1 + l2[x];
      arcs.push_back({w, u, f[x] + e});   // u - w <= f + e
      arcs.push_back({u, w, e - f[x]});   // w - u <= e - f
    }
    std::vector<double> dist(n1 + n2, 0.0);
    for (std::size_t round = 0; round <= n1 + n2; ++round) {
      bool changed = false;
      for (const auto& a : arcs) {
        if (dist[a.from] + a.w < dist[a.to] - 1e-13) {
          dist[a.to] = dist[a.from] + a.w;
          changed = true;
        }
      }
      if (!changed) return true;
    }
    return false;
  };
  double lo = 0.0, hi = 0.0;
  for (double v : f) hi = std::max(hi, std::abs(v));
  if (feasible(0.0)) return 0.0;
  for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
    const double mid = 0.5 * (lo + hi);
    (feasible(mid) ? hi : lo) = mid;
  }
  return hi;
}

inline bool oracle_related(const PointSet& ps, std::size_t a, std::size_t b, int which) {
  const ExactVector& d = ps.direction(which).exact();
  return a != b && project_exact(d, ps.exact_point(a)) == project_exact(d, ps.exact_point(b));
}

// Fewest points on a simple alternating path from u to v, by exhaustive DFS; 0 if none.
inline std::size_t oracle_shortest_simple(const PointSet& ps, std::size_t u, std::size_t v) {
  if (u == v) return 1;
  std::size_t best = 0;
  std::vector<bool> used(ps.size(), false);
  std::function<void(std::size_t, int, std::size_t)> dfs = [&](std::size_t at, int last, std::size_t len) {
    if (at == v) {
      if (best == 0 || len < best) best = len;
      return;
    }
    if (best != 0 && len >= best) return;
    for (std::size_t next = 0; next < ps.size(); ++next) {
      if (used[next]) continue;
      for (int kind : {1, 2}) {
        if (kind == last || !oracle_related(ps, at, next, kind)) continue;
        used[next] = true;
        dfs(next, kind, len + 1);
        used[next] = false;
      }
    }
  };
  used[u] = true;
  dfs(u, 0, 1);
  return best;
}

}  // namespace testing
