#include <cmath>
#include <numbers>

#include "doctest.h"
#include "wulff/droplet.hpp"
#include "wulff/errors.hpp"
#include "wulff/sampler.hpp"

using namespace wulff;

TEST_CASE("droplet extraction") {
  // Rounded contour corners cost O(1/n); at n = 256 the square is within one percent.
  const Lattice lattice(256);
  const DropletShape none = droplet_extract(SpinConfig::uniform(lattice, 1, SpinBoundary::free));
  CHECK_FALSE(none.circularity.has_value());
  CHECK(none.region.empty());
  const DropletShape square = droplet_extract(SpinConfig::uniform(lattice, -1, SpinBoundary::free));
  REQUIRE(square.circularity.has_value());
  CHECK(*square.circularity == doctest::Approx(std::numbers::pi / 4).epsilon(0.01));
  CHECK(square.area == doctest::Approx(1.0));

  const Lattice big(128);
  auto disc = SpinConfig::uniform(big, 1, SpinBoundary::free);
  for (int i = 0; i < big.site_count(); ++i) {
    const Point2 x = site_point(128, big.site(i));
    if (std::hypot(x.u - 0.05, x.v) < 0.25) disc.values[static_cast<std::size_t>(i)] = -1;
  }
  const DropletShape shape = droplet_extract(disc);
  REQUIRE(shape.circularity.has_value());
  CHECK(*shape.circularity >= 0.95);
  CHECK(shape.area == doctest::Approx(std::numbers::pi * 0.0625).epsilon(0.02));
  CHECK(shape.center.u == doctest::Approx(0.05).epsilon(0.05));
}

TEST_CASE("majority smoothing") {
  const Lattice lattice(5);
  auto sigma = SpinConfig::uniform(lattice, 1, SpinBoundary::free);
  sigma.values[12] = -1;
  const auto smooth = majority_smooth(sigma);
  CHECK(smooth[12] == 1);
  // Corner site sees four sites; two and two is a tie and keeps the value.
  auto tie = SpinConfig::uniform(lattice, 1, SpinBoundary::free);
  tie.values[0] = -1;
  tie.values[1] = -1;
  CHECK(majority_smooth(tie)[0] == -1);
}

TEST_CASE("deficit threshold") {
  const long long t = deficit_threshold(32, 0.5, 0.3);
  CHECK(t <= 0.7 * onsager_mstar(0.5) * 1024);
  CHECK(t + 2 > 0.7 * onsager_mstar(0.5) * 1024);
}

TEST_CASE("conditioned sampling is deterministic") {
  ConditionedParams params;
  params.n = 16;
  params.beta = critical().beta_c + 0.05;
  params.delta = 0.3;
  params.sweeps = 60;
  params.thermalize = 20;
  params.stride = 5;
  params.field = -0.02;
  const auto a = conditioned_sample(params, RngStream(71, 0));
  const auto b = conditioned_sample(params, RngStream(71, 0));
  CHECK(a.samples == b.samples);
  CHECK(a.weights == b.weights);
  double total = 0.0;
  for (std::size_t k = 0; k < a.samples.size(); ++k) {
    CHECK(a.samples[k].total() <= a.threshold);
    total += a.weights[k];
  }
  CHECK(total == doctest::Approx(1.0));
  params.threads = 2;
  params.chains = 2;
  const auto c = conditioned_sample(params, RngStream(71, 0));
  params.threads = 1;
  const auto d = conditioned_sample(params, RngStream(71, 0));
  CHECK(c.samples == d.samples);
}

TEST_CASE("small deficits accept about half the states") {
  const auto estimate = deficit_probability_rejection(32, critical().beta_c + 0.05, 1e-4, 4000, RngStream(72, 0));
  CHECK(std::exp(estimate.log_probability) == doctest::Approx(0.5).epsilon(0.3));
}

TEST_CASE("predicted rates") {
  CHECK(predicted_rate(0.3, AreaConvention::full) == doctest::Approx(4.0 * 2.0 * std::sqrt(std::numbers::pi * 0.3)));
  CHECK(predicted_rate(0.3, AreaConvention::half) == doctest::Approx(5.4917).epsilon(1e-4));
  CHECK(predicted_rate(0.3, AreaConvention::full) == doctest::Approx(7.7665).epsilon(1e-4));
}

TEST_CASE("rough measure of saturated configurations") {
  const int n = 64;
  const Lattice lattice(n);
  const auto plus = SpinConfig::uniform(lattice, 1, SpinBoundary::free);
  const auto open = EdgeConfig::uniform(lattice, true, BoundaryCondition::free());
  const RoughMeasure all = rough_measure(lattice, open, plus, 2);
  CHECK(all.minus.empty());
  CHECK(all.large_clusters == 1);
  CHECK(all.plus.cell_count() == n * n);
  CHECK(all.measure.total() == doctest::Approx(1.0));
  CHECK(contiguity_distance(plus, all, 1.0) < 1e-9);

  const auto closed = EdgeConfig::uniform(lattice, false, BoundaryCondition::free());
  const RoughMeasure frame = rough_measure(lattice, closed, plus, 2);
  CHECK(frame.large_clusters == 0);
  CHECK(frame.minus.empty());
  CHECK_FALSE(frame.plus.empty());
  CHECK(frame.plus.cell_count() < n * n);
  for (int j = 0; j < n; ++j) {
    CHECK(frame.plus.contains(0, j));
    CHECK(frame.plus.contains(n - 1, j));
  }

  CHECK_THROWS_AS(rough_measure(lattice, open, plus, 1), ConfigError);
  CHECK_THROWS_AS(rough_measure(Lattice(24), EdgeConfig::uniform(Lattice(24), true, BoundaryCondition::free()),
                                SpinConfig::uniform(Lattice(24), 1, SpinBoundary::free), 2),
                  ConfigError);
  auto mixed = plus;
  mixed.values[5] = -1;
  CHECK_THROWS_AS(rough_measure(lattice, open, mixed, 2), ConfigError);
}

TEST_CASE("rough measure of two phases") {
  // The plus frame has width 6K/n, so the halves are only resolved for n >> K.
  const int n = 256;
  const Lattice lattice(n);
  auto sigma = SpinConfig::uniform(lattice, 1, SpinBoundary::free);
  auto omega = EdgeConfig::uniform(lattice, true, BoundaryCondition::free());
  for (int i = 0; i < lattice.site_count(); ++i) {
    if (lattice.site(i).y < n / 2) sigma.values[static_cast<std::size_t>(i)] = -1;
  }
  for (int e = 0; e < lattice.edge_count(); ++e) {
    const Edge& edge = lattice.edge(e);
    if (sigma.values[static_cast<std::size_t>(edge.a)] != sigma.values[static_cast<std::size_t>(edge.b)]) {
      omega.open[static_cast<std::size_t>(e)] = 0;
    }
  }
  const RoughMeasure rough = rough_measure(lattice, omega, sigma, 2);
  CHECK(rough.large_clusters == 2);
  CHECK(rough.minus.area() == doctest::Approx(0.5).epsilon(0.25));
  CHECK(contiguity_distance(sigma, rough, 1.0) < 0.15);
}
