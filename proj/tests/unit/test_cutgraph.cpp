#include <cmath>

#include "doctest.h"
#include "wulff/cutgraph.hpp"
#include "wulff/enumerate.hpp"
#include "wulff/interface.hpp"
#include "wulff/ladder.hpp"
#include "wulff/rare.hpp"

using namespace wulff;

TEST_CASE("shortest counts the open edges a dual path must cross") {
  // Chain source - a - b - target across primal edges 0, 1, 2.
  CutGraph graph;
  const int s = graph.add_node(true, false), a = graph.add_node(false, false), b = graph.add_node(false, false),
            t = graph.add_node(false, true);
  graph.add_step(s, a, 0);
  graph.add_step(a, b, 1);
  graph.add_step(b, t, 2);
  const std::vector<std::uint8_t> none{0, 0, 0}, one{0, 1, 0}, all{1, 1, 1};
  CHECK(graph.shortest(none) == 0);
  CHECK(graph.shortest(one) == 1);
  CHECK(graph.shortest(all) == 3);
  CHECK(graph.shortest(all, 2) == 2);
  CHECK(graph.edges() == std::vector<int>{0, 1, 2});
  CutGraph unreachable;
  unreachable.add_node(true, false);
  unreachable.add_node(false, true);
  CHECK(unreachable.shortest(none) == CutGraph::unreachable);
}

TEST_CASE("wall cut graph agrees with the wall check") {
  RngStream rng(41, 0);
  const Lattice lattice(16);
  const HalfPoint start{3, 15}, target{27, 15};
  for (double half_width : {1.0, 2.0, 4.0}) {
    CutGraph graph = wall_cut_graph(lattice, start, target, half_width);
    for (int trial = 0; trial < 200; ++trial) {
      auto omega = EdgeConfig::uniform(lattice, false, BoundaryCondition::wired());
      const double p = 0.2 + 0.5 * rng.uniform();
      for (auto& e : omega.open) e = rng.uniform() < p ? 1 : 0;
      CHECK((graph.shortest(omega.open) == 0) == wall_check(lattice, omega, start, target, half_width));
    }
  }
}

TEST_CASE("weighted histogram reweighting recovers a binomial tail exactly") {
  // s ~ Binomial(N, q) at lambda = 0; window lambda tilts it by exp(lambda s).
  const int trials = 12;
  const double q = 0.6;
  std::vector<LadderWindow> windows;
  for (int w = 0; w < 6; ++w) {
    LadderWindow window;
    window.lambda = -0.8 * w;
    const double tilted = q * std::exp(window.lambda) / (1 - q + q * std::exp(window.lambda));
    for (int s = 0; s <= trials; ++s) {
      const double mass = std::exp(std::lgamma(trials + 1.0) - std::lgamma(s + 1.0) - std::lgamma(trials - s + 1.0) +
                                   s * std::log(tilted) + (trials - s) * std::log1p(-tilted));
      const auto count = static_cast<long long>(std::llround(mass * 1e9));
      if (count > 0) window.counts[s] = {count, s == 0 ? count : 0};
    }
    windows.push_back(window);
  }
  const LadderResult result = ladder_log_probability(windows, 0.0);
  CHECK(result.log_probability == doctest::Approx(trials * std::log1p(-q)).epsilon(1e-6));
  CHECK(ladder_min_overlap(windows) > 0.0);
}

TEST_CASE("cut-biased ladder matches enumeration on a small box") {
  const Lattice lattice(3);
  const double p = 0.75;
  const BlockEventParams crossing{BlockEvent::crossing};
  double exact = 0.0;
  const FkTable table = enumerate_fk(lattice, p, BoundaryCondition::free());
  for (std::uint64_t mask = 0; mask < table.prob.size(); ++mask) {
    if (!evaluate_block_event(lattice, table.config(mask), lattice.bounds(), crossing)) exact += table.prob[mask];
  }
  CutLadderParams params;
  params.n = 3;
  params.p = p;
  params.bc = BoundaryCondition::free();
  params.biases = linear_biases(4, 1.5);
  params.sweeps = 4000;
  params.thermalize = 100;
  params.replicas = 4;
  const CutLadderResult result =
      cut_zero_log_probability(params, box_crossing_statistic(lattice, lattice.bounds()), RngStream(42, 0));
  CHECK(std::abs(result.log_probability - std::log(exact)) < 4.0 * result.std_error + 0.03);
  CHECK(result.replicas.size() == 4);
  CHECK(result.windows == 4);
  CHECK(linear_biases(3, 2.0) == std::vector<double>{0.0, 1.0, 2.0});

  // A ladder stopping short of the event climbs on at its last spacing.
  params.biases = {0.0, 0.25};
  params.sweeps = 2000;
  params.min_top_hits = 0.5;
  const CutLadderResult extended =
      cut_zero_log_probability(params, box_crossing_statistic(lattice, lattice.bounds()), RngStream(42, 1));
  CHECK(extended.windows > 2);
  CHECK(extended.windows <= 2 + params.max_extra_windows);
  CHECK(std::abs(extended.log_probability - std::log(exact)) < 4.0 * extended.std_error + 0.05);
}
