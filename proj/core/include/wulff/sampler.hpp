#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wulff/lattice.hpp"
#include "wulff/model.hpp"
#include "wulff/rng.hpp"

namespace wulff {

// Swendsen-Wang chain: each sweep draws bonds from the spins (agreeing edges
// open with probability p) and then recolours the clusters. Classes attached to
// the first boundary block are +1; with a uniform field h every other class of
// size s is +1 with probability 1 / (1 + exp(-2 h s)).
class ClusterSampler final {
 public:
  ClusterSampler(int n, double p, BoundaryCondition bc, RngStream rng, double field = 0.0);
  static ClusterSampler ising(int n, double beta, SpinBoundary bc, RngStream rng, double field = 0.0);

  void sweep();
  void run(int sweeps) {
    for (int i = 0; i < sweeps; ++i) sweep();
  }

  const Lattice& lattice() const { return lattice_; }
  double p() const { return p_; }
  double field() const { return field_; }
  void set_field(double h) { field_ = h; }
  // Replaces the spin state; the bonds keep describing the previous sweep.
  void set_spins(std::span<const std::int8_t> spins);

  std::span<const std::int8_t> spins() const { return spins_; }
  std::span<const std::uint8_t> bonds() const { return bonds_; }
  SpinConfig spin_config() const;
  EdgeConfig edge_config() const;
  long long magnetization() const { return magnetization_; }

  // Class representative of a site for the bonds of the last sweep; sites in the
  // same open cluster, or wired together through a boundary block, share it.
  int root(int site) { return dsu_find(site); }

 private:
  int dsu_find(int x);
  void dsu_unite(int a, int b);

  Lattice lattice_;
  double p_;
  BoundaryCondition bc_;
  RngStream rng_;
  double field_;
  std::uint64_t open_threshold_;
  bool always_open_;
  std::vector<int> block_;
  int blocks_;
  std::vector<std::int8_t> spins_;
  std::vector<std::uint8_t> bonds_;
  std::vector<int> parent_;
  std::vector<int> size_;
  std::vector<std::int8_t> color_;
  long long magnetization_ = 0;
};

EdgeConfig sample_fk(int n, double p, const BoundaryCondition& bc, int sweeps, RngStream rng);

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
};

// Batch-means estimate from a sequence of per-sample values.
Estimate batch_means(std::span<const double> values, int batches = 20);

struct TwoPointParams {
  int n = 64;                 // simulation box side (free boundary conditions)
  double beta_hat = 0.3;      // subcritical coupling
  Site direction{1, 0};       // lattice step
  int k_min = 0;
  int k_max = 16;
  int samples = 1000;
  int thermalize = 200;
  int stride = 2;             // spacing of reference sites
};

// Estimates <sigma(z) sigma(z + k direction)> for k in [k_min, k_max] through
// the FK connection probability, averaged over reference sites far from the
// boundary. Throws for beta_hat >= beta_c.
std::vector<Estimate> two_point_profile(const TwoPointParams& params, RngStream rng);
Estimate two_point_estimate(int n, double beta_hat, Site x, int samples, RngStream rng);

}  // namespace wulff
