#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "wulff/blocks.hpp"
#include "wulff/measure.hpp"
#include "wulff/model.hpp"
#include "wulff/rng.hpp"

namespace wulff {

// Largest minus region of a spin configuration after 3x3 majority smoothing.
struct DropletShape {
  DiscreteRegion region;  // on the n x n grid of site cells
  double area = 0.0;      // in units of Q
  double perimeter_raw = 0.0;
  double perimeter_poly = 0.0;
  std::optional<double> circularity;  // 4 pi area / perimeter_poly^2; empty without a droplet
  Point2 center;
};

// Each site takes the majority sign of the in-box sites of its 3x3 neighbourhood;
// ties keep the site's own value.
std::vector<std::int8_t> majority_smooth(const SpinConfig& sigma);
DropletShape droplet_extract(const SpinConfig& sigma);

// Largest admissible magnetization sum under the constraint
// sum sigma <= (1 - delta) m* n^2.
long long deficit_threshold(int n, double beta, double delta);

enum class ConditioningStrategy : std::uint8_t { rejection, tilt };

struct ConditionedParams {
  int n = 64;
  double beta = 0.47;
  double delta = 0.3;
  ConditioningStrategy strategy = ConditioningStrategy::tilt;
  int sweeps = 4000;       // per chain, after thermalization
  int thermalize = 500;
  int stride = 10;         // sweeps between recorded states
  int chains = 1;          // chain c uses rng.split(c)
  int threads = 1;
  std::optional<double> field;  // tilt only; calibrated on pilot runs when empty
  int pilot_sweeps = 400;
};

struct ConditionedSamples {
  std::vector<SpinConfig> samples;  // ordered by (chain, index)
  std::vector<double> weights;      // normalised to sum 1
  std::vector<int> chain;
  long long threshold = 0;
  double field = 0.0;
  double acceptance = 0.0;  // rejection: kept fraction; tilt: accepted proposals
  double effective_samples = 0.0;  // (sum w)^2 / sum w^2
};

// rejection: plain chain, states violating the constraint are discarded.
// tilt: chain for mu * exp(h sum sigma) whose proposals (one sweep with field h)
// are refused when they leave the constraint set, so it samples the tilted
// measure restricted to the constraint; weights exp(-h sum sigma) undo the tilt.
// Throws StarvationError when nothing satisfies the constraint.
ConditionedSamples conditioned_sample(const ConditionedParams& params, RngStream rng);

// Field at which pilot runs of the constrained tilt chain have mean magnetization
// sum (1 - delta - margin) m* n^2, found by bisection on [-0.1, 0]; 0 when the
// untilted constrained chain already sits below that. Unconstrained pilots are
// no use here: their mean jumps from the plus state to the flipped box.
double calibrate_tilt(int n, double beta, double delta, int pilot_sweeps, RngStream rng, double margin = 0.05);

// Uniform field whose unconstrained chain has mean magnetization sum `target`.
double field_for_mean(int n, double beta, double target, int pilot_sweeps, RngStream rng);

struct DeficitEstimate {
  double log_probability = 0.0;
  double std_error = 0.0;
  long long threshold = 0;
  int levels = 0;
};

// Nested constrained chains: level k runs the chain restricted to
// {sum sigma <= c_k} and c_{k+1} is the `quantile` point of its samples, so
// log P = sum_k log P[sum sigma <= c_{k+1} | sum sigma <= c_k]. Replicas give the
// standard error.
struct LevelParams {
  int n = 32;
  double beta = 0.49;
  double delta = 0.3;
  int sweeps_per_level = 2000;
  double quantile = 0.4;
  int replicas = 4;
  int thermalize = 200;
  int threads = 1;
};
DeficitEstimate deficit_probability_levels(const LevelParams& params, RngStream rng);

DeficitEstimate deficit_probability_rejection(int n, double beta, double delta, int sweeps, RngStream rng);

// Multiple-histogram reweighting over a ladder of uniform fields from 0 down to
// the field whose unconstrained mean magnetization meets the threshold.
DeficitEstimate deficit_probability_tilt(int n, double beta, double delta, int windows, int sweeps_per_window,
                                         RngStream rng);

// tau_c times the perimeter of a disc of the convention's area.
double predicted_rate(double delta, AreaConvention convention, double tau_c = 4.0);

struct RatePoint {
  int n = 0;
  double beta = 0.0;
  DeficitEstimate estimate;
  double rate = 0.0;  // -log P / ((beta - beta_c) n)
  double rate_error = 0.0;
};

struct RateEstimate {
  double delta = 0.0;
  double tau_c = 4.0;
  std::vector<RatePoint> points;
  double j_full = 0.0;
  double j_half = 0.0;
};

// ---- rough measure -----------------------------------------------------------

// Coarse-grained two-phase picture of a coupled pair (omega, sigma) at block scale K.
// Cell sets live on the n x n grid of site cells; blocks are clipped at the far edge.
struct RoughMeasure {
  SignedMeasure measure;  // +1 off M_n, -1 on M_n, on the n x n grid
  DiscreteRegion plus;    // P_n, the frame of width 3K included
  DiscreteRegion minus;   // M_n
  int large_clusters = 0;
  std::vector<std::vector<Site>> hulls;  // C-hat per large cluster, in block coordinates
  std::vector<BadComponent> bad;         // components of F-hat, largest first
  int bad_blocks = 0;                    // |F-hat|
  double perimeter_bound = 0.0;          // 16 + 8 (K/n) |F-hat|
};

// Large clusters have sup-diameter >= K log n; good blocks follow good_def (the
// regular event with M = K on the 3x3 event block when empty). Each L-inf
// component of good blocks is filled with the residual components of diameter
// < log n away from the box boundary. Throws ConfigError unless K >= 2,
// n > 6 K log n and sigma is constant on every open cluster; AlgorithmError when
// the hulls of two large clusters overlap.
RoughMeasure rough_measure(const Lattice& lattice, const EdgeConfig& omega, const SpinConfig& sigma, int k,
                           std::span<const BlockEventParams> good_def = {}, int threads = 1);

// Maximum over the dictionary of |sigma_n(f) - rough(f)|, with sigma_n at the given m*.
double contiguity_distance(const SpinConfig& sigma, const RoughMeasure& rough, double mstar);

}  // namespace wulff
