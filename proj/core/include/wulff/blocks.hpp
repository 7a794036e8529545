#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "wulff/cutgraph.hpp"
#include "wulff/lattice.hpp"
#include "wulff/model.hpp"
#include "wulff/rng.hpp"
#include "wulff/sampler.hpp"

namespace wulff {

// Local events of a box, all read from the edges with both endpoints inside it.
//   crossing:  some open cluster meets all four sides (it is then unique)
//   regular:   crossing, every other cluster has sup-diameter < M, and the
//              crossing cluster crosses every sub-box of sup-diameter M
//   dense:     crossing and the crossing cluster has >= (1 - delta) theta |box| sites
//   circuit:   no open dual path joins the outer ring to the inner box shrunk by
//              delta times the side on every edge
//   boundary:  at most (1 + delta) theta |box| sites are connected to the sides
//   balanced:  |sum of spins over clusters not meeting the sides| <= delta theta |box|
enum class BlockEvent : std::uint8_t { crossing, regular, dense, circuit, boundary, balanced };

// Fewest open edges a dual path must cross to join two opposite sides of the box
// through its interior; zero exactly when the crossing event fails. Sides >= 2.
int crossing_cut(const Lattice& lattice, const EdgeConfig& omega, const Box& box);
int crossing_cut(const Lattice& lattice, std::span<const std::uint8_t> open, const Box& box);
// The two side-to-side dual graphs behind crossing_cut, for repeated evaluation:
// crossing_cut is the smaller of their shortest() values.
std::array<CutGraph, 2> crossing_cut_graphs(const Lattice& lattice, const Box& box);

// One-letter tags U R V F W T used on the command line and in CSV headers.
char block_event_letter(BlockEvent kind);
BlockEvent block_event_from_letter(char letter);

struct BlockEventParams {
  BlockEvent kind = BlockEvent::crossing;
  int diameter = 1;  // M, regular only
  double delta = 0.1;
  double theta = 1.0;
  void validate() const;
};

// Throws ConfigError when the box leaves the lattice or `balanced` lacks spins.
bool evaluate_block_event(const Lattice& lattice, const EdgeConfig& omega, const Box& box,
                          const BlockEventParams& params, const SpinConfig* sigma = nullptr);

// good[i] refers to grid.index_set()[i]; bit j of event_bits[i] records whether
// the j-th event of the definition held. Blocks at the far edge are clipped.
struct BlockField {
  BlockGrid grid;
  std::vector<std::uint8_t> good;
  std::vector<std::uint32_t> event_bits;

  double bad_fraction() const;
};

// A block is good when every listed event holds; `regular` is evaluated on the
// 3x3 event block (clipped to the lattice), the others on the block itself.
BlockField block_field(const Lattice& lattice, const EdgeConfig& omega, const SpinConfig* sigma, int k,
                       std::span<const BlockEventParams> good_def, int threads = 1);

struct BadComponent {
  std::vector<Site> blocks;  // sorted
  int size = 0;
  int diameter = 0;  // sup-norm, in block units
};
// Sup-norm connected components of the bad blocks, largest first.
std::vector<BadComponent> bad_component_stats(const BlockField& field);

void write_block_csv(std::ostream& out, const BlockField& field);

// Cramer transform of a Bernoulli(delta) at eps: eps log(eps/delta) + (1-eps) log((1-eps)/(1-delta)).
double cramer_rate(double eps, double delta);
// exp(-count t^2): tail of the mean of `count` independent [0,1] variables at t above their mean.
double hoeffding_bound(int count, double t, double mean);
// 9 exp(-cramer_rate(eps, delta) floor(n / 6K)^2): probability that a field of
// delta-dependent blocks has bad fraction at least eps.
double bad_fraction_bound(double eps, double delta, int n, int k);

// Relative covariance |P[A and B] - P[A] P[B]| / (P[A] P[B]) under the wired FK
// measure, estimated on a Swendsen-Wang chain; zero when either event is a.s. false.
struct MixingParams {
  int n = 48;
  double p = 0.7;
  Box gamma;
  Box delta;
  int samples = 4000;
  int thermalize = 200;
  int batches = 20;
};
using EdgeEvent = std::function<bool(const EdgeConfig&)>;
Estimate estimate_mixing(const MixingParams& params, const EdgeEvent& event_a, const EdgeEvent& event_b, RngStream rng);

// The event {edge a-b open}; throws when the sites are not adjacent in the lattice.
EdgeEvent edge_open_event(const Lattice& lattice, Site a, Site b);

}  // namespace wulff
