#include <cmath>
#include <algorithm>
#include <map>
#include <numeric>

#include "doctest.h"
#include "wulff/enumerate.hpp"
#include "wulff/model.hpp"
#include "wulff/rng.hpp"
#include "wulff/sampler.hpp"

using namespace wulff;

namespace {

// Upper 0.001 point of chi-square with `dof` degrees of freedom (Wilson-Hilferty).
double chi_square_critical(int dof) {
  const double z = 3.0902;
  const double a = 2.0 / (9.0 * dof);
  return dof * std::pow(1.0 - a + z * std::sqrt(a), 3.0);
}

std::uint64_t draw(const std::vector<double>& cumulative, RngStream& rng) {
  const double u = rng.uniform() * cumulative.back();
  return static_cast<std::uint64_t>(std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin());
}

}  // namespace

TEST_CASE("rng streams are reproducible and distinct") {
  RngStream a(5, 1), b(5, 1), c(5, 2);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a();
    CHECK(x == b());
    differs = differs || x != c();
  }
  CHECK(differs);
  RngStream u(3, 0);
  for (int i = 0; i < 1000; ++i) {
    const double v = u.uniform();
    CHECK(v >= 0.0);
    CHECK(v < 1.0);
    CHECK(u.below(7) < 7);
  }
}

TEST_CASE("sample_fk is deterministic") {
  const auto a = sample_fk(8, 0.6, BoundaryCondition::wired(), 50, RngStream(11, 3));
  const auto b = sample_fk(8, 0.6, BoundaryCondition::wired(), 50, RngStream(11, 3));
  CHECK(a == b);
  const auto c = sample_fk(8, 0.6, BoundaryCondition::wired(), 50, RngStream(11, 4));
  CHECK(a != c);
}

TEST_CASE("open fraction tends to one as p does") {
  const auto omega = sample_fk(12, 0.999, BoundaryCondition::wired(), 20, RngStream(2, 0));
  CHECK(omega.open_count() >= omega.open.size() * 0.98);
}

TEST_CASE("one alternation step preserves the exact FK law") {
  const Lattice lattice(3);
  const double p = 0.6;
  const FkTable table = enumerate_fk(lattice, p, BoundaryCondition::wired());
  std::vector<double> cumulative(table.prob.size());
  std::partial_sum(table.prob.begin(), table.prob.end(), cumulative.begin());

  // Joint statistic (open edges, clusters) keeps the bins well populated.
  std::map<std::pair<int, int>, double> expected;
  const auto blocks = BoundaryCondition::wired().block_of_site(lattice);
  std::vector<std::pair<int, int>> stat_of(table.prob.size());
  for (std::uint64_t mask = 0; mask < table.prob.size(); ++mask) {
    const EdgeConfig omega = table.config(mask);
    stat_of[mask] = {omega.open_count(), count_clusters(lattice, omega.open, blocks)};
    expected[stat_of[mask]] += table.prob[mask];
  }

  RngStream rng(17, 0);
  const int trials = 100000;
  std::map<std::pair<int, int>, long long> observed;
  for (int t = 0; t < trials; ++t) {
    const EdgeConfig start = table.config(draw(cumulative, rng));
    const SpinConfig sigma = couple_fk_to_spin(lattice, start, rng);
    const EdgeConfig next = couple_spin_to_fk(lattice, sigma, p, rng);
    ++observed[{next.open_count(), count_clusters(lattice, next.open, blocks)}];
  }

  // Pool bins with fewer than 5 expected counts.
  double chi2 = 0.0, pooled_expected = 0.0;
  long long pooled_observed = 0;
  int bins = 0;
  for (const auto& [key, probability] : expected) {
    const double e = probability * trials;
    const long long o = observed.contains(key) ? observed[key] : 0;
    if (e < 5.0) {
      pooled_expected += e;
      pooled_observed += o;
      continue;
    }
    chi2 += (o - e) * (o - e) / e;
    ++bins;
  }
  if (pooled_expected > 0.0) {
    chi2 += (pooled_observed - pooled_expected) * (pooled_observed - pooled_expected) / pooled_expected;
    ++bins;
  }
  REQUIRE(bins > 5);
  CHECK(chi2 < chi_square_critical(bins - 1));
}

TEST_CASE("sampler histogram matches enumeration on the 4-box") {
  // 24 edges: the exact open-count law comes from the 2^24 enumeration.
  const Lattice lattice(4);
  const double p = 0.6;
  std::vector<double> exact(static_cast<std::size_t>(lattice.edge_count() + 1), 0.0);
  for_each_fk_config(lattice, BoundaryCondition::wired(), [&](std::uint64_t, int open, int clusters) {
    exact[static_cast<std::size_t>(open)] += std::ldexp(1.0, clusters) * std::pow(p, open) *
                                            std::pow(1 - p, lattice.edge_count() - open);
  });
  const double z = std::accumulate(exact.begin(), exact.end(), 0.0);
  ClusterSampler chain(4, p, BoundaryCondition::wired(), RngStream(4, 0));
  chain.run(100);
  std::vector<double> hist(exact.size(), 0.0);
  const int sweeps = 100000;
  for (int s = 0; s < sweeps; ++s) {
    chain.sweep();
    hist[static_cast<std::size_t>(chain.edge_config().open_count())] += 1.0;
  }
  double tv = 0.0;
  for (std::size_t i = 0; i < exact.size(); ++i) tv += std::abs(exact[i] / z - hist[i] / sweeps);
  CHECK(tv / 2.0 < 0.02);
}

TEST_CASE("batch means") {
  std::vector<double> constant(100, 3.0);
  const Estimate e = batch_means(constant);
  CHECK(e.mean == doctest::Approx(3.0));
  CHECK(e.std_error == doctest::Approx(0.0));
}

TEST_CASE("two-point function at zero coupling and zero distance") {
  const Estimate zero = two_point_estimate(16, 0.0, {4, 0}, 200, RngStream(3, 0));
  CHECK(std::abs(zero.mean) < 1e-12);
  const Estimate self = two_point_estimate(16, 0.2, {0, 0}, 50, RngStream(3, 1));
  CHECK(self.mean == doctest::Approx(1.0));
  CHECK_THROWS(two_point_estimate(16, 0.5, {1, 0}, 10, RngStream(3, 2)));
}
