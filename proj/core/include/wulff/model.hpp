#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wulff/lattice.hpp"
#include "wulff/rng.hpp"

namespace wulff {

// ---- boundary conditions -------------------------------------------------

// Partition of the boundary sites; wired is the one-block partition and free the
// empty one. Boundary sites in the same block are identified when counting clusters.
class BoundaryCondition final {
 public:
  enum class Kind : std::uint8_t { wired = 0, free = 1, partition = 2 };

  static BoundaryCondition wired() { return BoundaryCondition(Kind::wired, {}); }
  static BoundaryCondition free() { return BoundaryCondition(Kind::free, {}); }
  // Blocks are lists of site indices; validated against a lattice on use.
  static BoundaryCondition partition(std::vector<std::vector<int>> blocks);

  Kind kind() const { return kind_; }
  const std::vector<std::vector<int>>& blocks() const { return blocks_; }

  // Block id of every site, -1 for sites not identified with anything.
  std::vector<int> block_of_site(const Lattice& lattice) const;
  int block_count(const Lattice& lattice) const;
  void validate(const Lattice& lattice) const;

  friend bool operator==(const BoundaryCondition&, const BoundaryCondition&) = default;

 private:
  BoundaryCondition(Kind kind, std::vector<std::vector<int>> blocks)
      : kind_(kind), blocks_(std::move(blocks)) {}
  Kind kind_;
  std::vector<std::vector<int>> blocks_;
};

// ---- configurations ------------------------------------------------------

enum class SpinBoundary : std::uint8_t { plus = 0, free = 1 };

struct SpinConfig {
  int side = 0;
  SpinBoundary bc = SpinBoundary::plus;
  std::vector<std::int8_t> values;  // by site index

  static SpinConfig uniform(const Lattice& lattice, std::int8_t value, SpinBoundary bc);
  long long total() const;
  friend bool operator==(const SpinConfig&, const SpinConfig&) = default;
};

struct EdgeConfig {
  int side = 0;
  BoundaryCondition bc = BoundaryCondition::wired();
  std::vector<std::uint8_t> open;  // by canonical edge index

  static EdgeConfig uniform(const Lattice& lattice, bool open, BoundaryCondition bc);
  int open_count() const;
  friend bool operator==(const EdgeConfig&, const EdgeConfig&) = default;
};

// Open clusters of an edge configuration. Labels follow open connectivity only;
// count_with_bc additionally identifies clusters meeting the same boundary block.
struct ClusterSet {
  std::vector<int> label;                   // site -> cluster id, ids ordered by lowest site
  std::vector<int> sizes;                   // cluster id -> number of sites
  std::vector<std::uint8_t> touches_boundary;
  int count_with_bc = 0;

  int cluster_count() const { return static_cast<int>(sizes.size()); }
};

ClusterSet label_clusters(const Lattice& lattice, std::span<const std::uint8_t> open,
                          const BoundaryCondition& bc);
ClusterSet label_clusters(const Lattice& lattice, const EdgeConfig& omega);

// cl^pi without building labels; the hot path of enumeration.
int count_clusters(const Lattice& lattice, std::span<const std::uint8_t> open,
                   std::span<const int> block_of_site);

// ---- critical point and closed forms ---------------------------------------

struct CriticalConstants {
  double p_c;
  double beta_c;
  int q;
};

const CriticalConstants& critical();

double p_of_beta(double beta);
double beta_of_p(double p);
// p -> 2(1-p)/(2-p); an involution on (0, 1).
double dual_p(double p);
// sinh(2 beta) sinh(2 dual) = 1; an involution on (0, inf).
double dual_beta(double beta);
// Spontaneous magnetization (1 - sinh(2 beta)^-4)^(1/8); zero for beta <= beta_c.
double onsager_mstar(double beta);
// FK density of the infinite cluster; equals onsager_mstar(beta(p)) for q = 2.
double theta_of_p(double p);
// Axis surface tension 2 beta + log tanh beta = 2 (beta - dual_beta(beta)); zero for beta <= beta_c.
double exact_tension(double beta);

// ---- Ising energy and FK weight --------------------------------------------

// -1/2 sum over ordered interior neighbour pairs - sum of interior spins times
// their number of boundary neighbours. Requires plus boundary conditions.
double hamiltonian(const Lattice& lattice, const SpinConfig& sigma);

double fk_log_weight(const Lattice& lattice, const EdgeConfig& omega, double p);
// Direct product for up to 64 edges, exp of the log weight otherwise.
double fk_weight(const Lattice& lattice, const EdgeConfig& omega, double p);

// ---- Edwards-Sokal coupling -------------------------------------------------

// Clusters meeting the first boundary block are +1; every other identified class
// gets an independent fair sign.
SpinConfig couple_fk_to_spin(const Lattice& lattice, const EdgeConfig& omega, RngStream& rng);

// Edges between agreeing spins open with probability p; disagreeing edges closed.
EdgeConfig couple_spin_to_fk(const Lattice& lattice, const SpinConfig& sigma, double p, RngStream& rng);

}  // namespace wulff
