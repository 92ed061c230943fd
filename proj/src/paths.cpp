#include "ridgeprox/paths.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <numeric>
#include <set>
#include <string>
#include <tuple>

#include "ridgeprox/parallel.hpp"

namespace ridgeprox {

namespace {

constexpr std::size_t kUnset = std::numeric_limits<std::size_t>::max();

// Search states are (point, kind of the step that reached it).
constexpr std::size_t state_of(std::size_t p, StepKind k) { return 2 * p + static_cast<std::size_t>(k); }
constexpr std::size_t point_of(std::size_t state) { return state / 2; }
constexpr StepKind kind_of(std::size_t state) { return static_cast<StepKind>(state % 2); }

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  // Keeps the smaller index as root.
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

std::string_view to_string(StepKind k) { return k == StepKind::perp_a1 ? "perp_a1" : "perp_a2"; }

std::size_t RelationGraph::count(StepKind k) const {
  return static_cast<std::size_t>(std::count_if(edges.begin(), edges.end(), [k](const Edge& e) { return e.kind == k; }));
}

struct PathGraph::Search {
  std::size_t source = 0;
  std::vector<std::size_t> dist;    // edges from source, per state
  std::vector<std::size_t> parent;  // predecessor state, kUnset for source-adjacent
  std::vector<std::size_t> order;   // discovery rank
};

PathGraph::PathGraph(const PointSet& ps) : first_(ridgeprox::fibers(ps, 1)), second_(ridgeprox::fibers(ps, 2)) {}

std::optional<Path> PathGraph::try_path(std::span<const std::size_t> seq, StepKind first) const {
  if (seq.empty()) return std::nullopt;
  Path path;
  path.points.assign(seq.begin(), seq.end());
  StepKind kind = first;
  for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
    if (!related(seq[i], seq[i + 1], kind)) return std::nullopt;
    path.steps.push_back(kind);
    kind = other(kind);
  }
  return path;
}

Path PathGraph::validate(std::span<const std::size_t> seq) const {
  if (seq.empty()) throw Error("a path needs at least one point");
  for (std::size_t idx : seq) {
    if (idx >= size()) throw Error("point index " + std::to_string(idx) + " out of range");
  }
  for (StepKind first : {StepKind::perp_a1, StepKind::perp_a2}) {
    if (auto p = try_path(seq, first)) return *std::move(p);
  }
  for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
    const std::size_t u = seq[i], v = seq[i + 1];
    if (u == v) throw Error("step " + std::to_string(i) + " repeats point " + std::to_string(u));
    if (!related(u, v, StepKind::perp_a1) && !related(u, v, StepKind::perp_a2)) {
      throw Error("step " + std::to_string(i) + " (" + std::to_string(u) + " -> " + std::to_string(v) +
                  ") shares neither projection");
    }
  }
  throw Error("steps do not alternate between the two directions");
}

std::optional<Path> PathGraph::as_closed(std::span<const std::size_t> seq) const {
  if (seq.size() < 2 || seq.size() % 2 != 0) return std::nullopt;
  for (StepKind first : {StepKind::perp_a1, StepKind::perp_a2}) {
    auto p = try_path(seq, first);
    if (p && related(seq.back(), seq.front(), other(p->steps.back()))) return p;
  }
  return std::nullopt;
}

PathGraph::Search PathGraph::search(std::size_t s) const {
  const std::size_t n = size();
  Search r;
  r.source = s;
  r.dist.assign(2 * n, kUnset);
  r.parent.assign(2 * n, kUnset);
  r.order.assign(2 * n, kUnset);

  // A fiber is expanded at most twice: the first expansion reaches every
  // member but the expander, the second can only add that expander.
  std::vector<std::uint8_t> expanded[2] = {std::vector<std::uint8_t>(first_.size(), 0),
                                           std::vector<std::uint8_t>(second_.size(), 0)};
  std::vector<std::size_t> first_expander[2] = {std::vector<std::size_t>(first_.size(), kUnset),
                                                std::vector<std::size_t>(second_.size(), kUnset)};

  std::vector<std::size_t> queue;
  queue.reserve(2 * n);
  std::size_t rank = 0;

  auto reach = [&](std::size_t q, StepKind k, std::size_t d, std::size_t from) {
    const std::size_t st = state_of(q, k);
    if (r.dist[st] != kUnset) return;
    r.dist[st] = d;
    r.parent[st] = from;
    r.order[st] = rank++;
    queue.push_back(st);
  };
  auto expand = [&](std::size_t p, StepKind k, std::size_t d, std::size_t from) {
    const auto& part = fibers(k);
    const std::size_t cls = part.class_of[p];
    const auto ki = static_cast<std::size_t>(k);
    auto& count = expanded[ki][cls];
    if (count == 0) {
      for (std::size_t q : part.classes[cls]) {
        if (q != p) reach(q, k, d, from);
      }
      first_expander[ki][cls] = p;
      count = 1;
    } else if (count == 1 && first_expander[ki][cls] != p) {
      reach(first_expander[ki][cls], k, d, from);
      count = 2;
    }
  };

  expand(s, StepKind::perp_a1, 1, kUnset);
  expand(s, StepKind::perp_a2, 1, kUnset);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::size_t st = queue[head];
    expand(point_of(st), other(kind_of(st)), r.dist[st] + 1, st);
  }
  return r;
}

std::optional<Path> PathGraph::shortest(std::size_t u, std::size_t v) const {
  if (u >= size() || v >= size()) throw Error("point index out of range");
  if (u == v) return Path{{u}, {}};
  const Search r = search(u);
  std::size_t best = kUnset;
  for (StepKind k : {StepKind::perp_a1, StepKind::perp_a2}) {
    const std::size_t st = state_of(v, k);
    if (r.dist[st] == kUnset) continue;
    if (best == kUnset || r.dist[st] < r.dist[best] || (r.dist[st] == r.dist[best] && r.order[st] < r.order[best])) {
      best = st;
    }
  }
  if (best == kUnset) return std::nullopt;
  Path path;
  for (std::size_t st = best; st != kUnset; st = r.parent[st]) {
    path.points.push_back(point_of(st));
    path.steps.push_back(kind_of(st));
  }
  path.points.push_back(u);
  std::reverse(path.points.begin(), path.points.end());
  std::reverse(path.steps.begin(), path.steps.end());
  return path;
}

std::vector<std::size_t> PathGraph::shortest_lengths(std::size_t s) const {
  const Search r = search(s);
  std::vector<std::size_t> out(size(), 0);
  for (std::size_t p = 0; p < size(); ++p) {
    const std::size_t d = std::min(r.dist[state_of(p, StepKind::perp_a1)], r.dist[state_of(p, StepKind::perp_a2)]);
    if (d != kUnset) out[p] = d + 1;
  }
  out[s] = 1;
  return out;
}

OrbitPartition PathGraph::orbits() const {
  DisjointSets sets(size());
  for (const auto* part : {&first_, &second_}) {
    for (const auto& cls : part->classes) {
      for (std::size_t i = 1; i < cls.size(); ++i) sets.unite(cls[0], cls[i]);
    }
  }
  OrbitPartition out;
  out.orbit_of.assign(size(), 0);
  std::vector<std::size_t> slot(size(), kUnset);
  for (std::size_t p = 0; p < size(); ++p) {
    const std::size_t root = sets.find(p);
    if (slot[root] == kUnset) {
      slot[root] = out.classes.size();
      out.classes.emplace_back();
      out.representative.push_back(p);
    }
    out.orbit_of[p] = slot[root];
    out.classes[slot[root]].push_back(p);
  }
  return out;
}

std::size_t PathGraph::irreducible_bound() const {
  std::vector<std::size_t> per_source(size(), 1);
  parallel_for(size(), [&](std::size_t s) {
    const auto lengths = shortest_lengths(s);
    per_source[s] = *std::max_element(lengths.begin(), lengths.end());
  });
  return *std::max_element(per_source.begin(), per_source.end());
}

RelationGraph PathGraph::relation_graph() const {
  RelationGraph g;
  g.vertex_count = size();
  for (StepKind k : {StepKind::perp_a1, StepKind::perp_a2}) {
    for (const auto& cls : fibers(k).classes) {
      for (std::size_t i = 0; i < cls.size(); ++i) {
        for (std::size_t j = i + 1; j < cls.size(); ++j) g.edges.push_back({cls[i], cls[j], k});
      }
    }
  }
  std::sort(g.edges.begin(), g.edges.end(), [](const Edge& a, const Edge& b) {
    return std::tie(a.u, a.v, a.kind) < std::tie(b.u, b.v, b.kind);
  });
  return g;
}

std::vector<Path> PathGraph::closed_paths(std::size_t max_points, ClosedPathLimits limits) const {
  if (max_points < 2 || max_points % 2 != 0) throw Error("max_points must be even and at least 2");
  if (size() > limits.max_set_points) {
    throw Error("closed-path enumeration is exhaustive; " + std::to_string(size()) + " points exceed the guard of " +
                std::to_string(limits.max_set_points));
  }
  if (max_points > limits.max_path_points) {
    throw Error("closed-path enumeration is exhaustive; max_points " + std::to_string(max_points) +
                " exceeds the guard of " + std::to_string(limits.max_path_points));
  }

  std::set<std::vector<std::size_t>> found;
  std::vector<std::size_t> seq;
  std::vector<bool> used(size(), false);

  // Each cycle is generated from its smallest point, so only larger points extend it.
  auto extend = [&](auto&& self, StepKind next) -> void {
    const std::size_t last = seq.back();
    const std::size_t start = seq.front();
    const auto& part = fibers(next);
    for (std::size_t q : part.classes[part.class_of[last]]) {
      if (q <= start || used[q]) continue;
      seq.push_back(q);
      used[q] = true;
      if (seq.size() % 2 == 0 && related(q, start, other(next))) {
        std::vector<std::size_t> reversed{start};
        reversed.insert(reversed.end(), seq.rbegin(), seq.rend() - 1);
        found.insert(std::min(seq, reversed));
      }
      if (seq.size() < max_points) self(self, other(next));
      used[q] = false;
      seq.pop_back();
    }
  };
  for (std::size_t s = 0; s < size(); ++s) {
    for (StepKind first : {StepKind::perp_a1, StepKind::perp_a2}) {
      seq.assign(1, s);
      used[s] = true;
      extend(extend, first);
      used[s] = false;
    }
  }

  std::vector<std::vector<std::size_t>> ordered(found.begin(), found.end());
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const auto& a, const auto& b) { return a.size() < b.size(); });
  std::vector<Path> out;
  out.reserve(ordered.size());
  for (const auto& c : ordered) out.push_back(*as_closed(c));
  return out;
}

Path validate_path(const PointSet& ps, std::span<const std::size_t> seq) { return PathGraph(ps).validate(seq); }

RelationGraph relation_graph(const PointSet& ps) { return PathGraph(ps).relation_graph(); }

OrbitPartition orbits(const PointSet& ps) { return PathGraph(ps).orbits(); }

std::optional<Path> shortest_alternating_path(const PointSet& ps, std::size_t u, std::size_t v) {
  return PathGraph(ps).shortest(u, v);
}

std::size_t irreducible_bound(const PointSet& ps) { return PathGraph(ps).irreducible_bound(); }

std::vector<Path> enumerate_closed_paths(const PointSet& ps, std::size_t max_points, ClosedPathLimits limits) {
  return PathGraph(ps).closed_paths(max_points, limits);
}

}  // namespace ridgeprox
