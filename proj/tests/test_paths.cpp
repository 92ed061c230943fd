#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "ridgeprox/paths.hpp"
#include "ridgeprox/repro.hpp"
#include "support.hpp"

using namespace ridgeprox;
using testing::ev;

namespace {

PointSet lk_set(std::size_t k) { return build_unit_square_instance(k).points; }

std::vector<std::size_t> iota(std::size_t n) {
  std::vector<std::size_t> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = i;
  return v;
}

const auto A1 = StepKind::perp_a1;
const auto A2 = StepKind::perp_a2;

}  // namespace

TEST_CASE("validate_path examples") {
  const auto s1 = build_section1(7).points;
  const auto p = validate_path(s1, iota(7));
  CHECK(p.length() == 7);
  CHECK(p.steps == std::vector<StepKind>{A1, A2, A1, A2, A1, A2});

  const std::vector<std::size_t> one{3};
  CHECK(validate_path(s1, one).length() == 1);
  CHECK(validate_path(s1, one).steps.empty());

  for (std::size_t k = 1; k <= 6; ++k) {
    const auto ps = lk_set(k);
    CHECK(validate_path(ps, iota(2 * k + 2)).length() == 2 * k + 2);
  }
}

TEST_CASE("validate_path rejections") {
  const auto ps = testing::grid(2, 2);  // (0,0),(0,1),(1,0),(1,1)
  const std::vector<std::size_t> unrelated{0, 3};
  CHECK_THROWS_AS((void)validate_path(ps, unrelated), Error);
  const std::vector<std::size_t> repeat{0, 0};
  CHECK_THROWS_AS((void)validate_path(ps, repeat), Error);
  const std::vector<std::size_t> same_kind{0, 1, 0};  // (0,0)->(0,1) twice along a1
  CHECK_THROWS_AS((void)validate_path(ps, same_kind), Error);
  const std::vector<std::size_t> out_of_range{0, 9};
  CHECK_THROWS_AS((void)validate_path(ps, out_of_range), Error);
  const std::vector<std::size_t> empty;
  CHECK_THROWS_AS((void)validate_path(ps, empty), Error);
}

TEST_CASE("the first step kind is inferred") {
  const auto ps = testing::grid(2, 2);
  const std::vector<std::size_t> seq{1, 0, 2, 3};
  const auto p = validate_path(ps, seq);
  CHECK(p.steps == std::vector<StepKind>{A1, A2, A1});
  std::vector<std::size_t> rev(seq.rbegin(), seq.rend());
  CHECK(validate_path(ps, rev).length() == 4);
}

TEST_CASE("relation_graph examples") {
  const auto g = relation_graph(testing::grid(2, 2));
  CHECK(g.edges.size() == 4);
  CHECK(g.count(A1) == 2);
  CHECK(g.count(A2) == 2);

  const auto lone = PointSet::exact({ev({0, 0}), ev({1, 2}), ev({3, 5})}, ev({1, 0}), ev({0, 1}));
  CHECK(relation_graph(lone).edges.empty());

  const auto s1 = relation_graph(build_section1(7).points);
  CHECK(s1.edges.size() == 6);
  for (const auto& e : s1.edges) CHECK(e.v == e.u + 1);
}

TEST_CASE("orbits examples") {
  CHECK(orbits(build_section1(7).points).size() == 1);
  const auto two = PointSet::exact({ev({0, 0}), ev({1, 2})}, ev({1, 0}), ev({0, 1}));
  CHECK(orbits(two).size() == 2);
  const auto ps = PointSet::exact({ev({0, 0}), ev({0, 1}), ev({1, 0}), ev({1, 1}), ev({5, 7})}, ev({1, 0}), ev({0, 1}));
  const auto o = orbits(ps);
  REQUIRE(o.size() == 2);
  CHECK(o.classes[0].size() == 4);
  CHECK(o.classes[1] == std::vector<std::size_t>{4});
  CHECK(o.representative == std::vector<std::size_t>{0, 4});
}

TEST_CASE("shortest_alternating_path examples") {
  for (std::size_t k = 1; k <= 10; ++k) {
    const auto ps = lk_set(k);
    const auto p = shortest_alternating_path(ps, 0, 2 * k + 1);
    REQUIRE(p.has_value());
    CHECK(p->length() == 2 * k + 2);
  }
  const auto g = testing::grid(2, 2);
  CHECK(shortest_alternating_path(g, 2, 2)->length() == 1);
  const auto p = shortest_alternating_path(g, 0, 3);
  REQUIRE(p.has_value());
  CHECK(p->points == std::vector<std::size_t>{0, 1, 3});
  const auto two = PointSet::exact({ev({0, 0}), ev({1, 2})}, ev({1, 0}), ev({0, 1}));
  CHECK_FALSE(shortest_alternating_path(two, 0, 1).has_value());
}

TEST_CASE("members of one fiber are a single step apart") {
  const auto row = PointSet::exact({ev({0, 0}), ev({1, 0}), ev({2, 0})}, ev({1, 0}), ev({0, 1}));
  CHECK(shortest_alternating_path(row, 0, 2)->length() == 2);
  CHECK(irreducible_bound(row) == 2);
}

TEST_CASE("irreducible_bound examples") {
  CHECK(irreducible_bound(testing::grid(2, 2)) == 3);
  CHECK(irreducible_bound(PointSet::exact({ev({1, 1})}, ev({1, 0}), ev({0, 1}))) == 1);
  for (std::size_t k = 1; k <= 6; ++k) {
    CHECK(irreducible_bound(lk_set(k)) == 2 * k + 2);
    CHECK(irreducible_bound(build_unit_square_instance(k, 5).points) >= 2 * k + 2);
  }
}

TEST_CASE("enumerate_closed_paths examples") {
  const auto cycles = enumerate_closed_paths(testing::grid(2, 2), 12);
  REQUIRE(cycles.size() == 1);
  CHECK(cycles[0].length() == 4);
  CHECK(enumerate_closed_paths(build_section1(7).points, 6).empty());
  CHECK(enumerate_closed_paths(testing::grid(3, 3), 4).size() == 9);
  CHECK_THROWS_AS((void)enumerate_closed_paths(testing::grid(5, 5), 4), Error);
  CHECK_THROWS_AS((void)enumerate_closed_paths(testing::grid(2, 2), 5), Error);
  CHECK_THROWS_AS((void)enumerate_closed_paths(testing::grid(2, 2), 14), Error);
  ClosedPathLimits wide;
  wide.max_set_points = 25;
  CHECK(enumerate_closed_paths(testing::grid(5, 5), 4, wide).size() == 100);
}

TEST_CASE("closed paths are even and close up") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 60; ++trial) {
    const auto ps = testing::random_planar_set(rng, 10);
    const PathGraph graph(ps);
    std::set<std::vector<std::size_t>> canon;
    for (const auto& p : graph.closed_paths(8)) {
      CHECK(p.length() % 2 == 0);
      auto closed = p.points;
      closed.push_back(p.points.front());
      CHECK_NOTHROW((void)graph.validate(closed));
      // Canonical form: smallest rotation over both orientations.
      std::vector<std::size_t> best;
      for (int dir = 0; dir < 2; ++dir) {
        auto seq = p.points;
        if (dir == 1) std::reverse(seq.begin(), seq.end());
        for (std::size_t r = 0; r < seq.size(); ++r) {
          std::rotate(seq.begin(), seq.begin() + 1, seq.end());
          if (best.empty() || seq < best) best = seq;
        }
      }
      CHECK(canon.insert(best).second);
    }
  }
}

TEST_CASE("path reversal preserves validity") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const auto ps = testing::random_planar_set(rng, 10);
    const PathGraph graph(ps);
    for (std::size_t u = 0; u < ps.size(); ++u) {
      for (std::size_t v = 0; v < ps.size(); ++v) {
        const auto p = graph.shortest(u, v);
        if (!p) continue;
        std::vector<std::size_t> rev(p->points.rbegin(), p->points.rend());
        CHECK(graph.validate(rev).length() == p->length());
      }
    }
  }
}

TEST_CASE("orbit soundness on random sets") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 100; ++trial) {
    const auto ps = testing::random_planar_set(rng, 12);
    const PathGraph graph(ps);
    const auto o = graph.orbits();
    for (std::size_t u = 0; u < ps.size(); ++u) {
      for (std::size_t v = 0; v < ps.size(); ++v) {
        CHECK(graph.shortest(u, v).has_value() == (o.orbit_of[u] == o.orbit_of[v]));
      }
    }
  }
}

TEST_CASE("shortest paths are irreducible by exhaustive search") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 80; ++trial) {
    const auto ps = testing::random_planar_set(rng, 8, 3);
    const PathGraph graph(ps);
    std::size_t bound = 1;
    for (std::size_t u = 0; u < ps.size(); ++u) {
      for (std::size_t v = 0; v < ps.size(); ++v) {
        const auto p = graph.shortest(u, v);
        const std::size_t brute = testing::oracle_shortest_simple(ps, u, v);
        CHECK((p ? p->length() : 0) == brute);
        if (p) {
          CHECK(p->points.front() == u);
          CHECK(p->points.back() == v);
          std::set<std::size_t> distinct(p->points.begin(), p->points.end());
          CHECK(distinct.size() == p->length());
          bound = std::max(bound, p->length());
        }
      }
    }
    CHECK(graph.irreducible_bound() == bound);
  }
}

TEST_CASE("irreducible_bound is invariant under permutation and affine maps") {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 60; ++trial) {
    const auto ps = testing::random_planar_set(rng, 12);
    const std::size_t bound = irreducible_bound(ps);

    std::vector<std::size_t> perm(ps.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    CHECK(irreducible_bound(ps.subset(perm)) == bound);

    // x -> A x + b with A = [[2, 1], [1, 1]], so d -> A^{-T} d with A^{-T} = [[1, -1], [-1, 2]].
    std::vector<ExactVector> moved;
    for (std::size_t i = 0; i < ps.size(); ++i) {
      const auto& p = ps.exact_point(i);
      moved.push_back({2 * p[0] + p[1] + 3, p[0] + p[1] - Rational(1, 2)});
    }
    auto map_dir = [](const ExactVector& d) { return ExactVector{d[0] - d[1], -d[0] + 2 * d[1]}; };
    const auto mapped = PointSet::exact(std::move(moved), map_dir(ps.direction(1).exact()),
                                        map_dir(ps.direction(2).exact()));
    CHECK(irreducible_bound(mapped) == bound);
  }
}
