#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "ridgeprox/geometry.hpp"

namespace ridgeprox {

/// A step joins two points with equal a1-projection (perp_a1) or equal
/// a2-projection (perp_a2).
enum class StepKind : std::uint8_t { perp_a1, perp_a2 };

constexpr StepKind other(StepKind k) {
  return k == StepKind::perp_a1 ? StepKind::perp_a2 : StepKind::perp_a1;
}
constexpr int direction_index(StepKind k) { return k == StepKind::perp_a1 ? 1 : 2; }
std::string_view to_string(StepKind k);

/// Ordered point sequence whose steps alternate strictly between the two kinds.
struct Path {
  std::vector<std::size_t> points;
  std::vector<StepKind> steps;

  [[nodiscard]] std::size_t length() const { return points.size(); }
};

struct Edge {
  std::size_t u;
  std::size_t v;
  StepKind kind;
};

struct RelationGraph {
  std::size_t vertex_count = 0;
  std::vector<Edge> edges;  // u < v, sorted by (u, v, kind)

  [[nodiscard]] std::size_t count(StepKind k) const;
};

struct OrbitPartition {
  std::vector<std::vector<std::size_t>> classes;  // ordered by smallest member
  std::vector<std::size_t> representative;        // smallest member of each class
  std::vector<std::size_t> orbit_of;

  [[nodiscard]] std::size_t size() const { return classes.size(); }
};

/// Guards for exhaustive closed-path enumeration.
struct ClosedPathLimits {
  std::size_t max_set_points = 20;
  std::size_t max_path_points = 12;
};

/// Fiber structure of a point set, shared by every path query.
class PathGraph {
 public:
  explicit PathGraph(const PointSet& ps);

  [[nodiscard]] std::size_t size() const { return first_.class_of.size(); }
  [[nodiscard]] const FiberPartition& fibers(StepKind k) const {
    return k == StepKind::perp_a1 ? first_ : second_;
  }
  [[nodiscard]] bool related(std::size_t u, std::size_t v, StepKind k) const {
    const auto& f = fibers(k);
    return u != v && f.class_of[u] == f.class_of[v];
  }

  /// seq as a path whose first step has kind `first`, if valid.
  [[nodiscard]] std::optional<Path> try_path(std::span<const std::size_t> seq, StepKind first) const;
  /// Throws Error naming the offending step.
  [[nodiscard]] Path validate(std::span<const std::size_t> seq) const;
  /// Valid open form of seq if appending seq[0] again still gives a path.
  [[nodiscard]] std::optional<Path> as_closed(std::span<const std::size_t> seq) const;

  [[nodiscard]] std::optional<Path> shortest(std::size_t u, std::size_t v) const;
  /// Point count of the shortest alternating path from s to each point; 0 if unreachable.
  [[nodiscard]] std::vector<std::size_t> shortest_lengths(std::size_t s) const;

  [[nodiscard]] OrbitPartition orbits() const;
  [[nodiscard]] std::size_t irreducible_bound() const;
  [[nodiscard]] RelationGraph relation_graph() const;
  [[nodiscard]] std::vector<Path> closed_paths(std::size_t max_points, ClosedPathLimits limits = {}) const;

 private:
  struct Search;
  Search search(std::size_t s) const;

  FiberPartition first_;
  FiberPartition second_;
};

Path validate_path(const PointSet& ps, std::span<const std::size_t> seq);
RelationGraph relation_graph(const PointSet& ps);
OrbitPartition orbits(const PointSet& ps);
std::optional<Path> shortest_alternating_path(const PointSet& ps, std::size_t u, std::size_t v);
std::size_t irreducible_bound(const PointSet& ps);
std::vector<Path> enumerate_closed_paths(const PointSet& ps, std::size_t max_points, ClosedPathLimits limits = {});

}  // namespace ridgeprox
