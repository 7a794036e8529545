#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wulff/droplet.hpp"
#include "wulff/enumerate.hpp"
#include "wulff/rare.hpp"
#include "wulff/rng.hpp"
#include "wulff/sampler.hpp"
#include "wulff/tension.hpp"

// Finite-size studies shared by the command-line driver and the acceptance suite.
// Every routine is a pure function of its parameters and the generator key.
namespace wulff {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};
// Ordinary least squares; needs at least two distinct abscissae.
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

// Joint law of (open edges, cl^pi) under the chain against exhaustive enumeration.
struct SamplerValidity {
  double total_variation = 0.0;
  long long sweeps = 0;
  int histogram_bins = 0;
};
SamplerValidity sampler_validity(int n, double p, const BoundaryCondition& bc, long long sweeps, RngStream rng);

struct MagnetizationStudy {
  Estimate magnetization;  // per site
  double onsager = 0.0;
};
MagnetizationStudy magnetization_study(int n, double beta, int sweeps, int thermalize, RngStream rng);

struct TensionStudy {
  double beta = 0.0;
  double beta_hat = 0.0;
  std::vector<Estimate> profile;  // G(k), k = 0..k_max
  DecayFit fit;                   // with the Ornstein-Zernike correction
  DecayFit plain_fit;
  double exact = 0.0;
  double critical_slope = 0.0;    // exact_tension(beta_c + 1e-3) / 1e-3
};
struct TensionParams {
  double beta = 0.5;
  int n = 64;
  int samples = 4000;
  int k_min = 4;
  int k_max = 16;
};
TensionStudy tension_study(const TensionParams& params, RngStream rng);

struct IsotropyPoint {
  double beta = 0.0;
  int torus = 0;
  IsotropyEstimate estimate;
  double exact_ratio = 0.0;
};
struct IsotropyTrend {
  IsotropyPoint cold;  // larger beta
  IsotropyPoint warm;  // closer to beta_c
  double improvement = 0.0;  // |R_cold - 1| - |R_warm - 1|
  double improvement_error = 0.0;
};
IsotropyTrend isotropy_trend(const IsotropyPoint& cold, int cold_samples, const IsotropyPoint& warm, int warm_samples,
                             RngStream rng);

// Randomized separation instances on a fixed geometry, each run through the
// whole interface pipeline with every postcondition recorded.
struct InterfaceStressParams {
  int instances = 10000;
  int n = 48;
  double radius = 0.45;
  double eta = 0.125;
  double rho = 0.3125;
};
struct InterfaceStress {
  int instances = 0;
  int tried = 0;
  int with_crossing = 0;
  int max_count = 0;
  int diameter_failures = 0;
  int count_failures = 0;
  int budget_failures = 0;
  int monotone_failures = 0;
  int bound_failures = 0;    // diameter sum of the separated pieces
  int upsilon_failures = 0;
  int errors = 0;            // exceptions thrown inside the pipeline
  int oracle_checked = 0;    // instances without crossing clusters
  int oracle_mismatches = 0;
  std::string first_error;
  std::vector<std::string> first_trace;  // trace of the first instance with crossing clusters
  int failures() const;
};
InterfaceStress interface_stress(const InterfaceStressParams& params, RngStream rng);

struct DropletStudyParams {
  int n = 64;
  double beta = 0.0;  // defaults to beta_c + 0.03
  double delta = 0.3;
  int sweeps = 4000;
  int stride = 10;
  int thermalize = 500;
  int chains = 1;
  int threads = 1;
  std::optional<double> field;
};
struct DropletRecord {
  DropletShape shape;
  double weight = 0.0;
};
struct DropletStudy {
  ConditionedSamples conditioned;
  std::vector<DropletRecord> droplets;  // per sample
  double mean_circularity = 0.0;        // weighted, 0 for samples without a droplet
  Point2 barycenter;                    // weighted mean of the sample barycenters
  double distance_full = 0.0;           // weighted mean weak distance to w_n
  double distance_half = 0.0;
  AreaConvention best = AreaConvention::half;
  double best_distance() const { return best == AreaConvention::full ? distance_full : distance_half; }
};
DropletStudy droplet_study(const DropletStudyParams& params, RngStream rng);

// rate(n) = -log P[deficit] / ((beta - beta_c) n) by nested constrained levels.
RateEstimate ldp_rate(std::span<const int> sizes, const LevelParams& level, double tau_c, RngStream rng);
// Conventions whose prediction lies within `tolerance` (relative) of the rate.
std::vector<AreaConvention> matching_conventions(const RateEstimate& rates, double rate, double tolerance);

struct DecayPoint {
  int k = 0;
  CutLadderResult ladder;
};
struct BlockDecay {
  double p = 0.0;
  std::vector<DecayPoint> points;
  LinearFit fit;      // log P against K
  bool decreasing = false;
};
struct BlockDecayParams {
  std::vector<int> sizes{8, 16, 24, 32};
  double p = 0.7;
  int windows = 8;
  double max_bias = 2.0;
  int sweeps = 800;
  int thermalize = 100;
  int replicas = 4;
};
// log Phi^{p,f}[no open cluster crosses Lambda(K)] for each K.
BlockDecay block_decay(const BlockDecayParams& params, RngStream rng);

struct ContiguityPoint {
  int n = 0;
  int k = 0;
  Estimate distance;
  double large_clusters = 0.0;
  double bad_blocks = 0.0;
  double minus_area = 0.0;
};
struct ContiguityParams {
  int n = 96;
  double beta = 0.0;  // defaults to beta_c + 0.05
  int k = 2;
  int samples = 100;
  int spacing = 5;
  int thermalize = 200;
};
ContiguityPoint contiguity_study(const ContiguityParams& params, RngStream rng);

// Wall event in a wired box of side n + 2 (ceil(half_width) + margin) + 1, the
// corridor centred on the middle row.
struct WallParams {
  int n = 32;
  double p = 0.66;
  double half_width = 0.0;  // defaults to sqrt(n)
  int margin = 4;
  int windows = 8;
  double max_bias = 2.0;
  int sweeps = 400;
  int thermalize = 100;
  int replicas = 3;
};
struct WallRate {
  int n = 0;
  int box = 0;
  double p = 0.0;
  double half_width = 0.0;
  CutLadderResult ladder;
  double per_length = 0.0;    // -log P / n
  double rate = 0.0;          // -log P / ((p - p_c) n)
  double predicted = 0.0;     // exact_tension(beta(p)) / (p - p_c)
  double ratio = 0.0;         // rate / predicted
};
WallRate wall_rate(const WallParams& params, RngStream rng);

}  // namespace wulff
