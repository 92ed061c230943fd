#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "ridgeprox/approx.hpp"
#include "ridgeprox/geometry.hpp"

namespace ridgeprox {

struct PathBoundCheck {
  std::size_t bound = 1;
  bool passes = true;
};

/// Maximum irreducible path length versus a threshold.
PathBoundCheck check_uniform_path_bound(const PointSet& ps, std::size_t threshold);

/// A level set of one projection that meets every level of the other projection.
struct CrossSectionWitness {
  int direction_index = 1;
  double level = 0.0;
  std::vector<std::size_t> section;
  bool covered = false;
};

/// First level (ascending) of direction `direction_index` whose section
/// meets every fiber of the other direction.
std::optional<CrossSectionWitness> find_cross_section(const PointSet& ps, int direction_index);

// Sampled check of the local section condition: around every probe x0 and for
// every delta there must be delta0 in (0, delta] and a level x_sigma of a2 in
//   sigma = { x : |a2.x - a2.x0| <= delta0 }
// such that each x in sigma has a partner x' in sigma with
//   a2.x' = a2.x_sigma,  a1.x' = a1.x,  sum_{i>=3} |a_i.x' - a_i.x| < delta.

struct SectionSystemOptions {
  std::vector<double> deltas{1.0, 0.5, 0.25, 0.125};
  double shrink = 0.5;
  std::size_t max_steps = 20;
  // Probe only these point indices; all points when empty.
  std::vector<std::size_t> probes;
};

struct SectionAttempt {
  bool solved = false;
  std::optional<std::size_t> sigma_witness;
  std::vector<std::size_t> failures;  // uncovered points for the x_sigma = x0 candidate
};

struct SectionProbe {
  std::size_t probe = 0;
  Vector x0;
  double delta = 0.0;
  std::optional<double> delta0;
  std::optional<std::size_t> sigma_witness;
  std::vector<std::size_t> failures;
};

struct SectionSystemReport {
  bool passes = true;
  std::vector<SectionProbe> per_probe;  // ordered by (probe, delta)
};

/// Precomputed projections for repeated attempts on one point set.
class SectionSystem {
 public:
  SectionSystem(const PointSet& ps, std::span<const Direction> basis);

  /// One (delta, delta0) attempt at probe x0. Candidate levels are tried with
  /// x0's own level first, then ascending.
  [[nodiscard]] SectionAttempt attempt(std::size_t x0, double delta, double delta0, bool collect_failures = true) const;
  [[nodiscard]] SectionSystemReport run(const SectionSystemOptions& options) const;

 private:
  [[nodiscard]] bool in_sigma(std::size_t x, std::size_t x0, double delta0) const;
  [[nodiscard]] double residual(std::size_t a, std::size_t b) const;

  const PointSet& ps_;
  FiberPartition first_;
  FiberPartition second_;
  Vector level2_;                   // a2.x per point
  std::vector<Vector> completion_;  // a_i.x for i >= 3
  // Members of each a2-class sorted by (a1-class, index).
  std::vector<std::vector<std::size_t>> by_first_class_;
};

SectionSystemReport check_section_system(const PointSet& ps, std::span<const Direction> basis,
                                         const SectionSystemOptions& options = {});

/// Largest orbit-to-fiber variation ratio over a family of fields constant on a1-fibers.
struct VariationRatioProbe {
  double max_ratio = 0.0;
  std::vector<VariationReport> reports;

  /// True when some field's ratio exceeds c.
  [[nodiscard]] bool violated(double c) const { return max_ratio > c; }
};

VariationRatioProbe variation_ratio_probe(const PointSet& ps, std::span<const ScalarField> fields);

}  // namespace ridgeprox
