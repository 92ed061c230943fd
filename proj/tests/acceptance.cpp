// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "ridgeprox/criteria.hpp"
#include "ridgeprox/repro.hpp"
#include "support.hpp"

using namespace ridgeprox;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, double budget_s, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = secs < budget_s;
  const bool pass = o.pass && in_time;
  if (!pass) ++failures;
  std::printf("criterion %d: %s - %s; %s; %.3f s (budget %.0f s)%s\n", id, pass ? "PASS" : "FAIL", title,
              o.detail.c_str(), secs, budget_s, in_time ? "" : " OVER BUDGET");
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

}  // namespace

int main() {
  criterion(1, "divergent g2 along the alternating path", 1.0, [] {
    const auto rows = verify_g2_divergence(21, SeriesSpec::harmonic());
    double worst_fit = 0.0;
    for (const auto& r : rows) worst_fit = std::max(worst_fit, r.minimax_error);
    double h10 = 0.0;
    for (int n = 1; n <= 10; ++n) h10 += 1.0 / n;
    const double gap = std::abs(rows.at(9).g2_span - h10);
    return Outcome{rows.size() == 10 && worst_fit <= 1e-9 && gap <= 1e-9,
                   "max minimax error " + fmt("%.3g", worst_fit) + ", g2 span at k=9 " + fmt("%.17g", rows[9].g2_span) +
                       " vs H_10 " + fmt("%.17g", h10)};
  });

  criterion(2, "unit-square variation ratio grows like k", 1.0, [] {
    bool ok = true;
    std::string ratios;
    for (std::size_t k = 1; k <= 10; ++k) {
      const auto c = verify_square_ratio(k);
      ok = ok && c.ok();
      ratios += (k > 1 ? " " : "") + fmt("%g", c.report.ratio);
    }
    return Outcome{ok, "ratios " + ratios};
  });

  criterion(3, "irreducible l_k path has 2k+2 points", 1.0, [] {
    bool ok = true;
    std::string lengths;
    for (std::size_t k = 1; k <= 10; ++k) {
      const auto inst = build_unit_square_instance(k);
      const auto p = shortest_alternating_path(inst.points, 0, 2 * k + 1);
      const std::size_t len = p ? p->length() : 0;
      ok = ok && len == 2 * k + 2;
      lengths += (k > 1 ? " " : "") + std::to_string(len);
    }
    return Outcome{ok, "lengths " + lengths};
  });

  criterion(4, "sampled section system on examples (b) and (c)", 10.0, [] {
    const auto cube = build_example_set(ExampleSet::cube, 9);
    const auto cube_report = check_section_system(cube, complete_basis(cube));
    std::size_t equal = 0;
    for (const auto& p : cube_report.per_probe) equal += (p.delta0 && *p.delta0 == p.delta) ? 1 : 0;
    const bool cube_ok = cube_report.passes && equal == cube_report.per_probe.size();

    const auto prism = build_example_set(ExampleSet::prism, 9);
    const auto probe = prism.find(std::vector<double>{1.75, 0, 0});
    if (!probe) return Outcome{false, "probe (7/4, 0, 0) missing from the prism sample"};
    const SectionSystem system(prism, complete_basis(prism));
    const bool fails_at_delta = !system.attempt(*probe, 1.75, 1.75).solved;
    bool small_ok = true;
    for (double d0 = 0.25; d0 >= 1.0 / 64; d0 /= 2) small_ok = small_ok && system.attempt(*probe, 1.75, d0).solved;
    SectionSystemOptions o;
    o.deltas = {1.75};
    o.probes = {*probe};
    const auto found = system.run(o).per_probe.at(0).delta0;
    const bool found_ok = found && *found <= 0.25;
    return Outcome{cube_ok && fails_at_delta && small_ok && found_ok,
                   "cube " + std::to_string(cube.size()) + " points, delta0 = delta at " + std::to_string(equal) + "/" +
                       std::to_string(cube_report.per_probe.size()) + " probes; prism delta0 = delta " +
                       (fails_at_delta ? "fails" : "passes") + ", first delta0 found " +
                       (found ? fmt("%g", *found) : std::string("none"))};
  });

  criterion(5, "closed-path functionals bound the minimax error", 30.0, [] {
    std::mt19937_64 rng(20240501);
    std::size_t paths = 0, violations = 0, char_mismatch = 0, with_paths = 0, matched = 0;
    for (int trial = 0; trial < 100; ++trial) {
      const auto ps = testing::random_planar_set(rng, 12, 3, 6);
      const auto f = trial % 3 == 0 ? testing::ridge_field(ps, rng) : testing::random_field(rng, ps.size());
      const double opt = minimax_fit(ps, f).error;
      const auto closed = enumerate_closed_paths(ps, 12);
      bool all_zero = true;
      double best = 0.0;
      for (const auto& p : closed) {
        const auto c = closed_path_functional(ps, f, p);
        ++paths;
        if (c.functional_value > opt + 1e-9) ++violations;
        if (std::abs(c.alternating_sum) > 1e-9) all_zero = false;
        best = std::max(best, c.functional_value);
      }
      if ((opt <= 1e-9) != all_zero) ++char_mismatch;
      if (!closed.empty()) {
        ++with_paths;
        if (std::abs(best - opt) <= 1e-7) ++matched;
      }
    }
    return Outcome{violations == 0 && char_mismatch == 0,
                   std::to_string(paths) + " closed paths, " + std::to_string(violations) +
                       " weak-duality violations, " + std::to_string(char_mismatch) +
                       " zero-error mismatches, certificate match rate " + std::to_string(matched) + "/" +
                       std::to_string(with_paths)};
  });

  criterion(6, "variation inequality with c = n0/2", 30.0, [] {
    std::mt19937_64 rng(20240502);
    std::size_t fields = 0, violations = 0;
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      const auto ps = testing::random_planar_set(rng, 16, 5);
      const double c = static_cast<double>(irreducible_bound(ps)) / 2.0;
      const auto labels = testing::oracle_fiber_labels(ps, 1);
      for (int s = 0; s < 10; ++s) {
        const auto levels = testing::random_field(rng, ps.size());
        ScalarField f(ps.size());
        for (std::size_t i = 0; i < ps.size(); ++i) f[i] = levels[labels[i]];
        const auto rep = variation_inequality_report(ps, f);
        ++fields;
        if (rep.lhs > c * rep.rhs + 1e-9) ++violations;
        if (rep.rhs > 0) worst = std::max(worst, rep.lhs / (c * rep.rhs));
      }
    }
    return Outcome{violations == 0, std::to_string(fields) + " fields, " + std::to_string(violations) +
                                        " violations, largest lhs / (c rhs) " + fmt("%.4f", worst)};
  });

  criterion(7, "alternating algorithm matches the LP on grids", 10.0, [] {
    std::mt19937_64 rng(20240503);
    std::size_t misses = 0;
    double worst = 0.0;
    std::size_t max_rounds_used = 0;
    for (int trial = 0; trial < 20; ++trial) {
      const std::size_t nx = 3 + static_cast<std::size_t>(trial % 4);
      const std::size_t ny = 3 + static_cast<std::size_t>((trial / 4) % 3);
      const auto ps = testing::grid(nx, ny);
      const auto f = testing::random_field(rng, ps.size());
      FitOptions fit;
      fit.attach_certificate = false;
      const double lp = minimax_fit(ps, f, fit).error;
      const auto alt = alternating_algorithm(ps, f, 2000, 0.0);
      const double gap = alt.error - lp;
      worst = std::max(worst, gap);
      max_rounds_used = std::max(max_rounds_used, alt.iterations);
      if (gap > 1e-6 || gap < -1e-9) {
        ++misses;
        std::printf("  grid %zux%zu: lp %.12g alternating %.12g\n", nx, ny, lp, alt.error);
      }
    }
    return Outcome{misses == 0, std::to_string(20 - misses) + "/20 within 1e-6, largest gap " + fmt("%.3g", worst) +
                                    ", most rounds " + std::to_string(max_rounds_used)};
  });

  std::printf("%s: %d criteria failed\n", failures == 0 ? "ALL PASS" : "FAILURES", failures);
  return failures == 0 ? 0 : 1;
}
