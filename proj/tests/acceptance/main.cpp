// Acceptance suite: one PASS/FAIL line per criterion. With arguments, runs only
// the listed criteria; the exit status is non-zero when any of them fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <functional>
#include <string>
#include <vector>

#include "wulff/enumerate.hpp"
#include "wulff/experiments.hpp"

using namespace wulff;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string format(const char* pattern, auto... args) {
  char buffer[512];
  std::snprintf(buffer, sizeof buffer, pattern, args...);
  return buffer;
}

RngStream stream(int criterion) { return RngStream(20240917, static_cast<std::uint64_t>(criterion)); }

Outcome coupling_exactness() {
  double worst = 0.0;
  for (SpinBoundary bc : {SpinBoundary::plus, SpinBoundary::free}) {
    const CouplingResult r = validate_coupling(Lattice(3), 0.5, bc);
    worst = std::max({worst, r.spin_tv, r.edge_tv});
  }
  return {worst < 1e-10, format("worst marginal TV %.3g (limit 1e-10)", worst)};
}

Outcome duality_identity() {
  double worst = 0.0;
  for (double p : {0.45, critical().p_c, 0.7}) {
    const DualityResult r = duality_check(Lattice(3), p);
    worst = std::max(worst, std::abs(r.primal_wired - r.dual_free));
  }
  const double fixed = std::abs(dual_p(critical().p_c) - critical().p_c);
  return {worst < 1e-10 && fixed < 1e-12,
          format("max |P_w[A] - P_f[A^]| %.3g (limit 1e-10), |dual_p(p_c) - p_c| %.3g (limit 1e-12)", worst, fixed)};
}

Outcome sampler_validity_check() {
  const SamplerValidity r = sampler_validity(4, 0.6, BoundaryCondition::wired(), 100000, stream(3));
  return {r.total_variation < 0.02,
          format("joint (open, clusters) TV %.4f over %d bins (limit 0.02)", r.total_variation, r.histogram_bins)};
}

Outcome onsager_magnetization() {
  const MagnetizationStudy r = magnetization_study(64, 0.5, 10000, 200, stream(4));
  const double gap = std::abs(r.magnetization.mean - r.onsager);
  return {gap <= 0.02, format("<sigma> %.5f +- %.5f, exact %.5f, gap %.5f (limit 0.02)", r.magnetization.mean,
                              r.magnetization.std_error, r.onsager, gap)};
}

Outcome surface_tension() {
  const TensionStudy r = tension_study(TensionParams{}, stream(5));
  const double relative = std::abs(r.fit.slope / r.exact - 1.0);
  const double slope_gap = std::abs(r.critical_slope - 4.0);
  return {relative <= 0.15 && slope_gap <= 0.02,
          format("beta_hat %.5f, fitted slope %.4f vs exact %.5f (rel. error %.3f, limit 0.15); critical slope %.4f "
                 "(limit 4 +- 0.02)",
                 r.beta_hat, r.fit.slope, r.exact, relative, r.critical_slope)};
}

Outcome isotropy_trend_check() {
  const IsotropyTrend r = isotropy_trend({0.55, 64}, 200000, {0.47, 128}, 400000, stream(6));
  const bool toward = r.improvement > 3.0 * r.improvement_error;
  return {toward, format("ratio %.5f +- %.5f at beta 0.55, %.5f +- %.5f at beta 0.47; |R-1| shrinks by %.5f +- %.5f "
                         "(needs > 3 sigma)",
                         r.cold.estimate.ratio, r.cold.estimate.ratio_error, r.warm.estimate.ratio,
                         r.warm.estimate.ratio_error, r.improvement, r.improvement_error)};
}

Outcome interface_algorithm() {
  const InterfaceStress r = interface_stress(InterfaceStressParams{}, stream(7));
  const bool ok = r.failures() == 0 && r.errors == 0 && r.oracle_mismatches == 0 && r.oracle_checked > 0;
  std::string detail = format(
      "%d instances (%d with crossing clusters, max K %d): diameter %d, count %d, budget %d, monotone %d, eq13 %d, "
      "upsilon %d failures, %d errors; K=1 oracle %d/%d mismatches",
      r.instances, r.with_crossing, r.max_count, r.diameter_failures, r.count_failures, r.budget_failures,
      r.monotone_failures, r.bound_failures, r.upsilon_failures, r.errors, r.oracle_mismatches, r.oracle_checked);
  if (!r.first_error.empty()) detail += "; first error: " + r.first_error;
  return {ok, detail};
}

Outcome wulff_circularity() {
  DropletStudyParams params;
  params.n = 64;
  params.beta = critical().beta_c + 0.03;
  params.delta = 0.3;
  params.chains = 4;
  const DropletStudy r = droplet_study(params, stream(8));
  const double ess = r.conditioned.effective_samples;
  const bool ok = ess >= 200.0 && r.mean_circularity >= 0.85 && r.best_distance() <= 0.15;
  return {ok, format("effective samples %.0f (needs 200), circularity %.3f (needs 0.85), weak distance %.4f under the "
                     "%s convention (needs 0.15; other %.4f)",
                     ess, r.mean_circularity, r.best_distance(), r.best == AreaConvention::full ? "full" : "half",
                     r.best == AreaConvention::full ? r.distance_half : r.distance_full)};
}

Outcome ldp_rate_check() {
  const std::vector<int> sizes{32, 48, 64};
  LevelParams level;
  level.beta = critical().beta_c + 0.05;
  level.delta = 0.3;
  const RateEstimate r = ldp_rate(sizes, level, 4.0, stream(9));
  bool positive = true, decreasing = true;
  std::string rates;
  for (std::size_t k = 0; k < r.points.size(); ++k) {
    positive = positive && r.points[k].rate > 0.0;
    if (k > 0) decreasing = decreasing && r.points[k].rate < r.points[k - 1].rate;
    rates += format("%s%d: %.3f +- %.3f", k ? ", " : "", r.points[k].n, r.points[k].rate, r.points[k].rate_error);
  }
  const auto matches = matching_conventions(r, r.points.back().rate, 0.4);
  std::string verdict = "none";
  if (matches.size() == 2) verdict = "both";
  if (matches.size() == 1) verdict = matches[0] == AreaConvention::full ? "full" : "half";
  return {positive && decreasing && matches.size() == 1,
          format("rates %s; J_full %.3f, J_half %.3f; within 40%% at n=64: %s (needs exactly one)", rates.c_str(),
                 r.j_full, r.j_half, verdict.c_str())};
}

Outcome block_decay_check() {
  const BlockDecay r = block_decay(BlockDecayParams{}, stream(10));
  std::string points;
  for (const auto& pt : r.points) {
    points += format("%sK=%d: %.3f +- %.3f", points.empty() ? "" : ", ", pt.k, pt.ladder.log_probability,
                     pt.ladder.std_error);
  }
  return {r.decreasing && r.fit.r_squared >= 0.9,
          format("log P[no crossing] %s; slope %.4f per site, R^2 %.4f (needs 0.9)", points.c_str(), r.fit.slope,
                 r.fit.r_squared)};
}

Outcome contiguity_check() {
  ContiguityParams small;
  small.n = 48;
  ContiguityParams large;
  large.n = 96;
  const ContiguityPoint a = contiguity_study(small, stream(11).split(48));
  const ContiguityPoint b = contiguity_study(large, stream(11).split(96));
  return {b.distance.mean <= 0.1 && b.distance.mean < a.distance.mean,
          format("mean distance %.4f +- %.4f at n=48, %.4f +- %.4f at n=96 (needs <= 0.1 and decreasing)",
                 a.distance.mean, a.distance.std_error, b.distance.mean, b.distance.std_error)};
}

Outcome wall_lower_bound() {
  WallParams small;
  small.n = 32;
  WallParams large;
  large.n = 64;
  large.windows = 14;
  large.sweeps = 600;
  bool ok = true;
  std::string detail;
  for (const WallParams& params : {small, large}) {
    const WallRate r = wall_rate(params, stream(12).split(static_cast<std::uint64_t>(params.n)));
    const bool within = std::isfinite(r.rate) && r.ratio >= 0.5 && r.ratio <= 2.0;
    ok = ok && within;
    detail += format("%sn=%d: log P %.3f +- %.3f, rate %.3f vs predicted %.3f (ratio %.3f)", detail.empty() ? "" : "; ",
                     r.n, r.ladder.log_probability, r.ladder.std_error, r.rate, r.predicted, r.ratio);
  }
  return {ok, detail + " (needs a finite ratio in [0.5, 2])"};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {1, "coupling exactness", coupling_exactness},
      {2, "duality identity", duality_identity},
      {3, "sampler validity", sampler_validity_check},
      {4, "Onsager magnetization", onsager_magnetization},
      {5, "surface tension", surface_tension},
      {6, "isotropy trend", isotropy_trend_check},
      {7, "interface algorithm", interface_algorithm},
      {8, "Wulff circularity", wulff_circularity},
      {9, "LDP rate", ldp_rate_check},
      {10, "block-event decay", block_decay_check},
      {11, "contiguity", contiguity_check},
      {12, "wall lower bound", wall_lower_bound},
  };
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    const int id = std::atoi(argv[i]);
    if (id < 1 || id > static_cast<int>(criteria.size())) {
      std::fprintf(stderr, "unknown criterion '%s' (expected 1-%zu)\n", argv[i], criteria.size());
      return 2;
    }
    selected.push_back(id);
  }
  if (selected.empty()) {
    for (const auto& c : criteria) selected.push_back(c.id);
  }
  int failures = 0;
  for (int id : selected) {
    const Criterion& c = criteria[static_cast<std::size_t>(id - 1)];
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("error: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("[%s] %2d %s: %s (%.1f s)\n", outcome.pass ? "PASS" : "FAIL", c.id, c.name, outcome.detail.c_str(),
                seconds);
    std::fflush(stdout);
    failures += outcome.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
