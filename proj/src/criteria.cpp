#include "ridgeprox/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ridgeprox/parallel.hpp"
#include "ridgeprox/paths.hpp"

namespace ridgeprox {

PathBoundCheck check_uniform_path_bound(const PointSet& ps, std::size_t threshold) {
  PathBoundCheck out;
  out.bound = irreducible_bound(ps);
  out.passes = out.bound <= threshold;
  return out;
}

std::optional<CrossSectionWitness> find_cross_section(const PointSet& ps, int direction_index) {
  if (direction_index != 1 && direction_index != 2) throw Error("direction index must be 1 or 2");
  const FiberPartition own = fibers(ps, direction_index);
  const FiberPartition other_dir = fibers(ps, 3 - direction_index);
  std::vector<std::size_t> seen(other_dir.size(), 0);
  std::size_t stamp = 0;
  for (std::size_t c = 0; c < own.size(); ++c) {
    ++stamp;
    std::size_t met = 0;
    for (std::size_t idx : own.classes[c]) {
      auto& s = seen[other_dir.class_of[idx]];
      if (s != stamp) {
        s = stamp;
        ++met;
      }
    }
    if (met == other_dir.size()) {
      return CrossSectionWitness{direction_index, own.class_value[c], own.classes[c], true};
    }
  }
  return std::nullopt;
}

SectionSystem::SectionSystem(const PointSet& ps, std::span<const Direction> basis)
    : ps_(ps), first_(fibers(ps, 1)), second_(fibers(ps, 2)), level2_(ps.projections(ps.direction(2))) {
  if (basis.size() != ps.dim()) {
    throw Error("basis has " + std::to_string(basis.size()) + " vectors for dimension " + std::to_string(ps.dim()));
  }
  for (const auto& d : basis) {
    if (d.dim() != ps.dim()) throw Error("basis vector dimension does not match the point set");
  }
  for (std::size_t i = 2; i < basis.size(); ++i) completion_.push_back(ps.projections(basis[i]));

  by_first_class_.resize(second_.size());
  for (std::size_t c = 0; c < second_.size(); ++c) {
    auto members = second_.classes[c];
    std::sort(members.begin(), members.end(), [&](std::size_t a, std::size_t b) {
      return std::pair(first_.class_of[a], a) < std::pair(first_.class_of[b], b);
    });
    by_first_class_[c] = std::move(members);
  }
}

bool SectionSystem::in_sigma(std::size_t x, std::size_t x0, double delta0) const {
  const double gap = std::fabs(level2_[x] - level2_[x0]);
  return gap <= delta0 + ps_.tol().slack(std::max(std::fabs(level2_[x]), std::fabs(level2_[x0])));
}

double SectionSystem::residual(std::size_t a, std::size_t b) const {
  double sum = 0.0;
  for (const auto& proj : completion_) sum += std::fabs(proj[a] - proj[b]);
  return sum;
}

SectionAttempt SectionSystem::attempt(std::size_t x0, double delta, double delta0, bool collect_failures) const {
  if (x0 >= ps_.size()) throw Error("probe index out of range");
  if (!(delta > 0) || !(delta0 > 0)) throw Error("delta and delta0 must be positive");

  std::vector<std::size_t> sigma;
  for (std::size_t x = 0; x < ps_.size(); ++x) {
    if (in_sigma(x, x0, delta0)) sigma.push_back(x);
  }
  std::vector<std::size_t> levels;
  for (std::size_t x : sigma) levels.push_back(second_.class_of[x]);
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  const std::size_t own = second_.class_of[x0];
  std::stable_partition(levels.begin(), levels.end(), [own](std::size_t c) { return c == own; });

  const double bound = delta + ps_.tol().slack(delta);
  auto covers = [&](std::size_t level, std::size_t x) {
    const auto& members = by_first_class_[level];
    const std::size_t target = first_.class_of[x];
    auto it = std::lower_bound(members.begin(), members.end(), target,
                               [&](std::size_t m, std::size_t t) { return first_.class_of[m] < t; });
    for (; it != members.end() && first_.class_of[*it] == target; ++it) {
      if (in_sigma(*it, x0, delta0) && residual(*it, x) < bound) return true;
    }
    return false;
  };

  SectionAttempt out;
  for (std::size_t level : levels) {
    const bool natural = level == own;
    bool ok = true;
    for (std::size_t x : sigma) {
      if (covers(level, x)) continue;
      ok = false;
      if (natural && collect_failures) {
        out.failures.push_back(x);
      } else {
        break;
      }
    }
    if (ok) {
      out.solved = true;
      out.failures.clear();
      out.sigma_witness = natural ? x0 : second_.classes[level].front();
      return out;
    }
  }
  return out;
}

SectionSystemReport SectionSystem::run(const SectionSystemOptions& options) const {
  if (options.deltas.empty()) throw Error("at least one delta is required");
  for (double d : options.deltas) {
    if (!(d > 0)) throw Error("deltas must be positive");
  }
  if (!(options.shrink > 0 && options.shrink < 1)) throw Error("shrink factor must lie in (0, 1)");

  std::vector<std::size_t> probes = options.probes;
  if (probes.empty()) {
    probes.resize(ps_.size());
    std::iota(probes.begin(), probes.end(), 0);
  }
  for (std::size_t p : probes) {
    if (p >= ps_.size()) throw Error("probe index " + std::to_string(p) + " out of range");
  }

  const std::size_t nd = options.deltas.size();
  SectionSystemReport report;
  report.per_probe.resize(probes.size() * nd);
  parallel_for(report.per_probe.size(), [&](std::size_t slot) {
    const std::size_t x0 = probes[slot / nd];
    const double delta = options.deltas[slot % nd];
    SectionProbe& out = report.per_probe[slot];
    out.probe = x0;
    const auto pt = ps_.point(x0);
    out.x0.assign(pt.begin(), pt.end());
    out.delta = delta;
    double delta0 = delta;
    for (std::size_t step = 0; step <= options.max_steps; ++step, delta0 *= options.shrink) {
      const SectionAttempt a = attempt(x0, delta, delta0, step == 0);
      if (a.solved) {
        out.delta0 = delta0;
        out.sigma_witness = a.sigma_witness;
        out.failures.clear();
        return;
      }
      if (step == 0) out.failures = a.failures;
    }
  });
  report.passes = std::all_of(report.per_probe.begin(), report.per_probe.end(),
                              [](const SectionProbe& p) { return p.delta0.has_value(); });
  return report;
}

SectionSystemReport check_section_system(const PointSet& ps, std::span<const Direction> basis,
                                         const SectionSystemOptions& options) {
  return SectionSystem(ps, basis).run(options);
}

VariationRatioProbe variation_ratio_probe(const PointSet& ps, std::span<const ScalarField> fields) {
  VariationRatioProbe out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (!constant_on_fibers(ps, fields[i], 1)) {
      throw Error("field " + std::to_string(i) + " is not constant on the a1-fibers");
    }
    out.reports.push_back(variation_inequality_report(ps, fields[i]));
    out.max_ratio = std::max(out.max_ratio, out.reports.back().ratio);
  }
  return out;
}

}  // namespace ridgeprox
