#include <cmath>
#include <numeric>

#include "doctest.h"
#include "wulff/blocks.hpp"
#include "wulff/enumerate.hpp"
#include "wulff/errors.hpp"
#include "wulff/model.hpp"

using namespace wulff;

TEST_CASE("exact Ising table agrees with ising_prob") {
  const Lattice lattice(3);
  const IsingTable table = enumerate_ising(lattice, 0.5, SpinBoundary::plus);
  CHECK(std::accumulate(table.prob.begin(), table.prob.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
  for (std::uint64_t mask = 0; mask < table.prob.size(); ++mask) {
    CHECK(std::abs(table.prob[mask] - ising_prob(lattice, table.config(mask), 0.5)) < 1e-12);
    CHECK(table.mask_of(table.config(mask)) == mask);
  }
}

TEST_CASE("zero coupling is uniform over the free spins") {
  const Lattice lattice(4);
  const IsingTable table = enumerate_ising(lattice, 0.0, SpinBoundary::plus);
  REQUIRE(table.prob.size() == 16);
  for (double p : table.prob) CHECK(p == doctest::Approx(1.0 / 16));
}

TEST_CASE("exact FK table is normalized and matches normalized weights") {
  const Lattice lattice(3);
  const FkTable table = enumerate_fk(lattice, 0.5, BoundaryCondition::wired());
  CHECK(std::abs(std::accumulate(table.prob.begin(), table.prob.end(), 0.0) - 1.0) < 1e-12);
  double z = 0.0;
  for (std::uint64_t mask = 0; mask < table.prob.size(); ++mask) z += fk_weight(lattice, table.config(mask), 0.5);
  for (std::uint64_t mask = 0; mask < table.prob.size(); mask += 37) {
    CHECK(std::abs(table.prob[mask] - fk_weight(lattice, table.config(mask), 0.5) / z) < 1e-14);
  }
}

TEST_CASE("oracle size limits") {
  CHECK_THROWS_AS(enumerate_fk(Lattice(5), 0.5, BoundaryCondition::wired()), OracleSizeError);
  CHECK_THROWS_AS(enumerate_ising(Lattice(7), 0.5, SpinBoundary::plus), OracleSizeError);
  CHECK_THROWS_AS(ising_prob(Lattice(7), SpinConfig::uniform(Lattice(7), 1, SpinBoundary::plus), 0.5), OracleSizeError);
}

TEST_CASE("Edwards-Sokal joint has the exact marginals") {
  for (SpinBoundary bc : {SpinBoundary::plus, SpinBoundary::free}) {
    const CouplingResult result = validate_coupling(Lattice(3), 0.5, bc);
    CHECK(result.spin_tv < 1e-10);
    CHECK(result.edge_tv < 1e-10);
    CHECK(result.joint_states > 0);
  }
}

TEST_CASE("planar duality of the crossing event") {
  for (double p : {0.3, 0.55, critical().p_c, 0.8}) {
    const DualityResult result = duality_check(Lattice(3), p);
    CHECK(result.p_dual == doctest::Approx(dual_p(p)));
    CHECK(std::abs(result.primal_wired - result.dual_free) < 1e-10);
  }
}

TEST_CASE("all-sides crossing probability is nondecreasing in p") {
  const Lattice lattice(3);
  const BlockEventParams crossing{BlockEvent::crossing};
  std::vector<std::uint8_t> crosses;
  for_each_fk_config(lattice, BoundaryCondition::wired(), [&](std::uint64_t mask, int, int) {
    EdgeConfig omega = EdgeConfig::uniform(lattice, false, BoundaryCondition::wired());
    for (int e = 0; e < lattice.edge_count(); ++e) omega.open[static_cast<std::size_t>(e)] = (mask >> e) & 1U;
    crosses.push_back(evaluate_block_event(lattice, omega, lattice.bounds(), crossing) ? 1 : 0);
  });
  double previous = -1.0;
  for (int i = 1; i <= 20; ++i) {
    const double p = i / 21.0;
    const FkTable table = enumerate_fk(lattice, p, BoundaryCondition::wired());
    double probability = 0.0;
    for (std::size_t mask = 0; mask < table.prob.size(); ++mask) probability += crosses[mask] * table.prob[mask];
    CHECK(probability >= previous - 1e-12);
    previous = probability;
  }
}

TEST_CASE("cluster counts are ordered by the boundary partition") {
  const Lattice lattice(3);
  // Boundary sites of the 3-box: 0 1 2 3 5 6 7 8.
  const std::vector<BoundaryCondition> partitions{
      BoundaryCondition::partition({{0, 1, 2}, {3, 5}, {6, 7, 8}}),
      BoundaryCondition::partition({{0}, {1}, {2}, {3}, {5}, {6}, {7}, {8}}),
      BoundaryCondition::partition({{0, 8}, {1, 2, 3, 5, 6, 7}}),
  };
  const auto wired_blocks = BoundaryCondition::wired().block_of_site(lattice);
  const auto free_blocks = BoundaryCondition::free().block_of_site(lattice);
  std::vector<std::vector<int>> partition_blocks;
  for (const auto& bc : partitions) partition_blocks.push_back(bc.block_of_site(lattice));
  std::vector<std::uint8_t> open(static_cast<std::size_t>(lattice.edge_count()));
  for (std::uint64_t mask = 0; mask < (1U << lattice.edge_count()); ++mask) {
    for (int e = 0; e < lattice.edge_count(); ++e) open[static_cast<std::size_t>(e)] = (mask >> e) & 1U;
    const int wired = count_clusters(lattice, open, wired_blocks);
    const int free = count_clusters(lattice, open, free_blocks);
    for (const auto& blocks : partition_blocks) {
      const int cl = count_clusters(lattice, open, blocks);
      CHECK(wired <= cl);
      CHECK(cl <= free);
    }
    CHECK(label_clusters(lattice, open, BoundaryCondition::wired()).count_with_bc == wired);
  }
}

TEST_CASE("cluster labels") {
  const Lattice lattice(4);
  const auto all = label_clusters(lattice, EdgeConfig::uniform(lattice, true, BoundaryCondition::free()));
  CHECK(all.cluster_count() == 1);
  CHECK(all.sizes[0] == 16);
  const auto none = label_clusters(lattice, EdgeConfig::uniform(lattice, false, BoundaryCondition::wired()));
  CHECK(none.cluster_count() == 16);
  CHECK(none.count_with_bc == 5);
  CHECK(std::accumulate(none.sizes.begin(), none.sizes.end(), 0) == 16);
}
