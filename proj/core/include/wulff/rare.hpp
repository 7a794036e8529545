#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "wulff/blocks.hpp"
#include "wulff/cutgraph.hpp"
#include "wulff/lattice.hpp"
#include "wulff/model.hpp"
#include "wulff/rng.hpp"

namespace wulff {

// Integer statistic of an edge configuration whose zero set is the rare event.
using CutStatistic = std::function<int(std::span<const std::uint8_t>)>;

// FK chain on the n-box for the measure Phi^{p, bc} * exp(-bias * cut). A sweep
// refreshes the listed edges by heat-bath proposals and then proposes one
// Edwards-Sokal recolouring of the whole box; both proposals are reversible for
// Phi, so a Metropolis test on the bias makes the chain exact.
class CutBiasedChain final {
 public:
  CutBiasedChain(int n, double p, BoundaryCondition bc, CutStatistic cut, std::vector<int> local_edges,
                 std::vector<int> cut_edges, RngStream rng);

  void sweep(double bias);
  int cut() const { return cut_value_; }
  std::span<const std::uint8_t> open() const { return open_; }
  double acceptance() const;  // accepted fraction of the whole-box proposals

 private:
  bool connected_without(int edge);
  void recolour_proposal(double bias);

  Lattice lattice_;
  double p_;
  BoundaryCondition bc_;
  CutStatistic cut_;
  std::vector<int> local_edges_;
  std::vector<std::uint8_t> affects_cut_;
  RngStream rng_;
  std::vector<int> block_;
  int blocks_ = 0;
  std::vector<std::vector<int>> block_sites_;
  std::vector<std::uint8_t> open_;
  int cut_value_ = 0;
  long long proposals_ = 0;
  long long accepted_ = 0;
  // Scratch for the two-sided search.
  std::vector<std::uint32_t> mark_;
  std::uint32_t generation_ = 0;
};

struct CutLadderParams {
  int n = 32;
  double p = 0.7;
  BoundaryCondition bc = BoundaryCondition::free();
  std::vector<double> biases;   // one window per bias, from 0 upwards
  int sweeps = 2000;            // recorded sweeps per window
  int thermalize = 200;         // per window, continuing from the previous one
  int replicas = 4;
  int max_extra_windows = 6;     // appended at the last spacing while the top window
  double min_top_hits = 0.05;    // spends less than this fraction at cut = 0
  std::vector<int> local_edges;  // heat-bath edges; all edges when empty
  std::vector<int> cut_edges;    // edges the statistic depends on; all when empty
};

struct CutLadderResult {
  double log_probability = 0.0;  // log Phi[cut = 0]
  double std_error = 0.0;        // over replicas
  std::vector<double> replicas;
  double min_overlap = 0.0;      // worst neighbouring-window histogram overlap
  double acceptance = 0.0;       // whole-box proposals, averaged over windows
  int windows = 0;               // most windows any replica ran
};

// Fewest open edges a dual crossing of the box must cut; zero exactly when no
// open cluster touches all four sides. The returned statistic owns scratch
// space, so copies must not be called concurrently.
CutStatistic box_crossing_statistic(const Lattice& lattice, const Box& box);
// shortest() of the given graph, e.g. one built by wall_cut_graph.
CutStatistic cut_graph_statistic(CutGraph graph);

// Multiple-histogram reweighting of the biased windows back to bias 0. Replica r
// uses rng.split(r). Throws StarvationError when no window, extra ones included,
// reaches cut = 0.
CutLadderResult cut_zero_log_probability(const CutLadderParams& params, const CutStatistic& cut, RngStream rng);

// biases 0, step, 2 step, ..., (windows - 1) step.
std::vector<double> linear_biases(int windows, double max_bias);

}  // namespace wulff
