#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "wulff/lattice.hpp"
#include "wulff/model.hpp"

namespace wulff {

inline constexpr int kMaxEnumeratedEdges = 24;
inline constexpr int kMaxEnumeratedSpins = 20;

// Exact Ising law on the free spins of a box: interior sites under plus
// boundary conditions, all sites under free ones. Bit i of a mask is free site i.
struct IsingTable {
  int side = 0;
  SpinBoundary bc = SpinBoundary::plus;
  double beta = 0.0;
  std::vector<int> free_sites;
  std::vector<double> prob;

  SpinConfig config(std::uint64_t mask) const;
  std::uint64_t mask_of(const SpinConfig& sigma) const;
};

IsingTable enumerate_ising(const Lattice& lattice, double beta, SpinBoundary bc);
double ising_prob(const Lattice& lattice, const SpinConfig& sigma, double beta);

// Exact FK law; bit e of a mask is canonical edge e.
struct FkTable {
  int side = 0;
  double p = 0.0;
  BoundaryCondition bc = BoundaryCondition::wired();
  std::vector<double> prob;

  EdgeConfig config(std::uint64_t mask) const;
};

FkTable enumerate_fk(const Lattice& lattice, double p, const BoundaryCondition& bc);

// Visits every edge configuration with its open count and cl^pi, in mask order.
void for_each_fk_config(const Lattice& lattice, const BoundaryCondition& bc,
                        const std::function<void(std::uint64_t mask, int open, int clusters)>& visit);

// Finite graph with an optional set of identified (wired) vertices.
struct SmallGraph {
  int vertices = 0;
  std::vector<std::pair<int, int>> edges;
  std::vector<std::uint8_t> wired;  // per vertex; empty means none wired
};

SmallGraph graph_of(const Lattice& lattice, const BoundaryCondition& bc);

// Planar dual of the box: vertices are the points of Z^2 + (1/2, 1/2) in
// [-1/2, n - 1/2]^2 (row-major), edge e is the dual of canonical primal edge e.
struct DualBox {
  int side = 0;
  SmallGraph graph;
  int vertex(HalfPoint p) const;  // -1 outside
  HalfPoint point(int v) const;
};
DualBox dual_box(const Lattice& lattice);

int graph_cluster_count(const SmallGraph& g, std::uint64_t open_mask);
std::vector<double> enumerate_graph_fk(const SmallGraph& g, double p);
bool graph_connects(const SmallGraph& g, std::uint64_t open_mask, std::span<const int> sources,
                    std::span<const int> targets);

// Left-right open crossing of the primal box.
bool primal_left_right_crossing(const Lattice& lattice, std::uint64_t open_mask);
// Top-bottom open crossing of the dual box (dual rows y = n - 1/2 and y = -1/2).
bool dual_top_bottom_crossing(const DualBox& dual, std::uint64_t dual_open_mask);

struct DualityResult {
  double p = 0.0;
  double p_dual = 0.0;
  double primal_wired = 0.0;  // Phi^{p,w}[A]
  double dual_free = 0.0;     // Phi^{p^,f}[A^]
};
DualityResult duality_check(const Lattice& lattice, double p);

// Exhaustive Edwards-Sokal joint built from the product of edge weights and the
// compatibility indicator; total-variation distance of each marginal to the
// stand-alone exact laws.
struct CouplingResult {
  double spin_tv = 0.0;
  double edge_tv = 0.0;
  std::size_t joint_states = 0;
};
CouplingResult validate_coupling(const Lattice& lattice, double beta, SpinBoundary bc);

}  // namespace wulff
