#pragma once

#include <span>
#include <vector>

#include "wulff/rng.hpp"
#include "wulff/sampler.hpp"

namespace wulff {

// Least-squares slope of -log G(k) against k over [k_min, k_max]. With the
// Ornstein-Zernike correction the regression uses -log G(k) - (1/2) log k, which
// removes the k^{-1/2} prefactor of the subcritical two-point function.
struct DecayFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};
DecayFit fit_decay(std::span<const Estimate> profile, int k_min, int k_max, bool ornstein_zernike);

// Zero-momentum correlators on an L x L torus at a subcritical coupling:
// C(t) = sum over clusters of sum_u n(u) n(u + t), where n(u) counts the cluster's
// sites on column u (axis) or on the line x + y = u mod L (diagonal).
struct WallCorrelatorParams {
  double beta_hat = 0.3;
  int torus = 64;
  int samples = 4000;
  int thermalize = 200;
  int batches = 40;
};

struct WallCorrelators {
  int torus = 0;
  std::vector<std::vector<double>> axis;      // batch -> C(t), t = 0..L/2
  std::vector<std::vector<double>> diagonal;  // batch -> C(t) per diagonal line
};
WallCorrelators wall_correlators(const WallCorrelatorParams& params, RngStream rng);

// Decay per step m from C(t_min)/C(t_max) = cosh(m (L/2 - t_min)) / cosh(m (L/2 - t_max)).
// The window is placed from the data at [start, end] times the inverse of the
// first effective mass log(C(1)/C(2)). Jackknife over batches.
struct MassWindow {
  double start = 1.5;
  double end = 3.0;
};
struct MassEstimate {
  double mass = 0.0;
  double std_error = 0.0;
  int t_min = 0;
  int t_max = 0;
};
MassEstimate wall_mass(const std::vector<std::vector<double>>& batches, MassWindow window = {});

// tau((1,1)) / (sqrt 2 tau((1,0))) at coupling beta, measured at its dual.
// Diagonal lines sit 1/sqrt 2 apart, so the ratio is sqrt 2 m_diag / m_axis.
struct IsotropyEstimate {
  MassEstimate axis;
  MassEstimate diagonal;
  double ratio = 0.0;
  double ratio_error = 0.0;
};
IsotropyEstimate isotropy_ratio(double beta, int torus, int samples, RngStream rng, MassWindow window = {});

// Exact tau((1,1)) = 2 log sinh 2 beta for beta > beta_c, else 0.
double exact_diagonal_tension(double beta);

}  // namespace wulff
