#include <cmath>
#include <limits>
#include <numbers>

#include "doctest.h"
#include "wulff/errors.hpp"
#include "wulff/measure.hpp"
#include "wulff/rng.hpp"

using namespace wulff;

namespace {

SpinConfig disc_spins(int n, Point2 center, double radius) {
  const Lattice lattice(n);
  auto sigma = SpinConfig::uniform(lattice, 1, SpinBoundary::free);
  for (int i = 0; i < lattice.site_count(); ++i) {
    const Point2 x = site_point(n, lattice.site(i));
    if (std::hypot(x.u - center.u, x.v - center.v) < radius) sigma.values[static_cast<std::size_t>(i)] = -1;
  }
  return sigma;
}

double cell_sum(const SignedMeasure& mu) {
  double sum = 0.0;
  for (double d : mu.densities()) sum += d * mu.cell_side() * mu.cell_side();
  for (const Atom& a : mu.atoms()) sum += a.weight;
  return sum;
}

}  // namespace

TEST_CASE("sigma measure totals") {
  const Lattice lattice(8);
  const double mstar = 0.9;
  for (int grid : {0, 8, 4}) {
    CHECK(sigma_measure(SpinConfig::uniform(lattice, 1, SpinBoundary::free), mstar, grid).total() ==
          doctest::Approx(1.0 / mstar));
    CHECK(sigma_measure(SpinConfig::uniform(lattice, -1, SpinBoundary::free), mstar, grid).total() ==
          doctest::Approx(-1.0 / mstar));
    auto halves = SpinConfig::uniform(lattice, 1, SpinBoundary::free);
    for (int i = 0; i < 32; ++i) halves.values[static_cast<std::size_t>(i)] = -1;
    CHECK(std::abs(sigma_measure(halves, mstar, grid).total()) < 1e-12);
  }
  CHECK_THROWS(sigma_measure(SpinConfig::uniform(lattice, 1, SpinBoundary::free), 0.0));
}

TEST_CASE("measure normalization on random configurations") {
  RngStream rng(61, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 4 + static_cast<int>(rng.below(20));
    auto sigma = SpinConfig::uniform(Lattice(n), 1, SpinBoundary::free);
    for (auto& s : sigma.values) s = rng.uniform() < 0.5 ? 1 : -1;
    const double mstar = 0.5 + 0.5 * rng.uniform();
    const double expected = static_cast<double>(sigma.total()) / (mstar * n * n);
    for (int grid : {0, n, 3}) {
      const SignedMeasure mu = sigma_measure(sigma, mstar, grid);
      CHECK(std::abs(mu.total() - expected) <= 1e-12);
      CHECK(std::abs(mu.total() - cell_sum(mu)) <= 1e-12);
    }
  }
}

TEST_CASE("barycenters") {
  const Point2 zero = barycenter(sigma_measure(SpinConfig::uniform(Lattice(10), 1, SpinBoundary::free), 1.0));
  CHECK(std::abs(zero.u) < 1e-12);
  CHECK(std::abs(zero.v) < 1e-12);
  const Point2 empty = barycenter(SignedMeasure(4));
  CHECK(empty.u == 0.0);
  CHECK(empty.v == 0.0);
  // A minus droplet of area a at c inside the plus phase moves the barycenter to -2 a c.
  const Point2 c{0.2, -0.1};
  const double radius = 0.15, area = std::numbers::pi * radius * radius;
  const Point2 b = barycenter(sigma_measure(disc_spins(256, c, radius), 1.0));
  CHECK(b.u == doctest::Approx(-2.0 * area * c.u).epsilon(0.01));
  CHECK(b.v == doctest::Approx(-2.0 * area * c.v).epsilon(0.01));
}

TEST_CASE("target droplet measure") {
  CHECK(droplet_radius(0.3, AreaConvention::full) == doctest::Approx(std::sqrt(0.3 / std::numbers::pi)));
  CHECK(droplet_radius(0.3, AreaConvention::full) == doctest::Approx(0.30902).epsilon(1e-4));
  CHECK(droplet_radius(0.3, AreaConvention::half) == doctest::Approx(0.21851).epsilon(1e-4));
  CHECK(droplet_area(0.3, AreaConvention::half) == doctest::Approx(0.15));
  const SignedMeasure full = target_w(0.3, {0.0, 0.0}, AreaConvention::full, 256);
  const SignedMeasure half = target_w(0.3, {0.0, 0.0}, AreaConvention::half, 256);
  CHECK(full.total() == doctest::Approx(0.4).epsilon(0.01));
  CHECK(half.total() == doctest::Approx(0.7).epsilon(0.01));
  for (double d : full.densities()) CHECK(std::abs(d) <= 1.0);
  const Point2 b = barycenter(full);
  CHECK(std::abs(b.u) < 1e-9);
  CHECK(std::abs(b.v) < 1e-9);
  CHECK(droplet_center(0.3, {0.02, 0.0}, CenterShift::half_barycenter, AreaConvention::full).u == doctest::Approx(-0.01));
  CHECK(droplet_center(0.3, {0.03, 0.0}, CenterShift::barycenter_over_delta, AreaConvention::full).u ==
        doctest::Approx(-0.1));
  CHECK(droplet_center(0.3, {0.03, 0.0}, CenterShift::area_consistent, AreaConvention::full).u ==
        doctest::Approx(-0.05));
  CHECK_THROWS_AS(target_w(0.3, {0.5, 0.0}, AreaConvention::full, 64), ConfigError);
}

TEST_CASE("area-consistent centre reproduces the barycenter") {
  const Point2 shifted{0.04, -0.03};
  const SignedMeasure w = target_w(0.3, shifted, AreaConvention::half, 512, CenterShift::area_consistent);
  const Point2 b = barycenter(w);
  CHECK(b.u == doctest::Approx(shifted.u).epsilon(0.02));
  CHECK(b.v == doctest::Approx(shifted.v).epsilon(0.02));
}

TEST_CASE("weak distance") {
  SignedMeasure lebesgue(4);
  for (int j = 0; j < 4; ++j)
    for (int i = 0; i < 4; ++i) lebesgue.density(i, j) = 1.0;
  CHECK(weak_distance(lebesgue, lebesgue) == 0.0);
  CHECK(weak_distance(lebesgue, SignedMeasure(4)) == doctest::Approx(1.0));
  CHECK(dictionary().size() == 27);
  for (const TestFunction& f : dictionary()) {
    // Midpoint-rule check of the closed-form cell integrals.
    double numeric = 0.0;
    const int m = 200;
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) numeric += f({-0.5 + (a + 0.5) / m, -0.5 + (b + 0.5) / m});
    CHECK(f.integral(-0.5, 0.5, -0.5, 0.5) == doctest::Approx(numeric / (m * m)).epsilon(1e-3).scale(1.0));
  }
}

TEST_CASE("discrete disc converges weakly to its target") {
  double previous = std::numeric_limits<double>::infinity();
  for (int n : {32, 64, 128}) {
    const double radius = droplet_radius(0.3, AreaConvention::half);
    const SignedMeasure sampled = sigma_measure(disc_spins(n, {0.0, 0.0}, radius), 1.0, n);
    const SignedMeasure target = target_w(0.3, {0.0, 0.0}, AreaConvention::half, n);
    const double d = weak_distance(sampled, target);
    CHECK(d <= previous + 1e-12);
    previous = d;
  }
  CHECK(previous < 0.01);
}

TEST_CASE("perimeters") {
  DiscreteRegion full(8);
  for (int j = 0; j < 8; ++j)
    for (int i = 0; i < 8; ++i) full.set(i, j, true);
  CHECK(perimeter(full) == doctest::Approx(4.0));
  CHECK(full.area() == doctest::Approx(1.0));
  DiscreteRegion square(8);
  for (int j = 2; j < 6; ++j)
    for (int i = 2; i < 6; ++i) square.set(i, j, true);
  CHECK(perimeter(square) == doctest::Approx(2.0));
  const DiscreteRegion disc = disc_region(512, {0.0, 0.0}, 0.25);
  const double circumference = 2.0 * std::numbers::pi * 0.25;
  CHECK(perimeter(disc) >= circumference);
  CHECK(perimeter(disc) <= 4.0 / std::numbers::pi * circumference + 1e-9);
  CHECK(perimeter(disc, PerimeterMethod::polygon) == doctest::Approx(circumference).epsilon(0.02));
  CHECK(perimeter(DiscreteRegion(8)) == 0.0);
}

TEST_CASE("rate function") {
  CHECK(rate_function(disc_region(512, {0.0, 0.0}, 0.25), 4.0) == doctest::Approx(2.0 * std::numbers::pi).epsilon(0.02));
  CHECK(rate_function(DiscreteRegion(16), 4.0) == 0.0);
  SignedMeasure half_density(4);
  for (int j = 0; j < 4; ++j)
    for (int i = 0; i < 4; ++i) half_density.density(i, j) = 1.0;
  half_density.density(1, 1) = 0.5;
  CHECK(std::isinf(rate_function(half_density, 4.0)));
  // Cell-averaged targets have fractional boundary cells; a +-1 raster is admissible.
  CHECK(std::isinf(rate_function(target_w(0.3, {0.0, 0.0}, AreaConvention::full, 64), 4.0)));
  const DiscreteRegion disc = disc_region(256, {0.0, 0.0}, 0.25);
  SignedMeasure raster(256);
  for (int j = 0; j < 256; ++j)
    for (int i = 0; i < 256; ++i) raster.density(i, j) = disc.contains(i, j) ? -1.0 : 1.0;
  CHECK(rate_function(raster, 4.0) == doctest::Approx(rate_function(disc, 4.0)));
}

TEST_CASE("rate function of refined discs converges") {
  std::vector<double> values;
  for (int grid : {64, 128, 256, 512, 1024}) values.push_back(rate_function(disc_region(grid, {0.0, 0.0}, 0.25), 4.0));
  const double exact = 2.0 * std::numbers::pi;
  for (std::size_t k = 1; k < values.size(); ++k) CHECK(std::abs(values[k] - exact) <= 0.02 * exact);
  CHECK(std::abs(values.back() - exact) <= std::abs(values.front() - exact) + 1e-9);
}

TEST_CASE("isoperimetric inequality on random regions") {
  RngStream rng(62, 0);
  for (int trial = 0; trial < 1000; ++trial) {
    // Unions of discs roughened by accretion of random neighbouring cells.
    const int grid = 64;
    DiscreteRegion region(grid);
    const int blobs = 1 + static_cast<int>(rng.below(4));
    for (int b = 0; b < blobs; ++b) {
      const Point2 c{-0.3 + 0.6 * rng.uniform(), -0.3 + 0.6 * rng.uniform()};
      const double r = 0.05 + 0.15 * rng.uniform();
      const DiscreteRegion disc = disc_region(grid, c, r);
      for (int j = 0; j < grid; ++j)
        for (int i = 0; i < grid; ++i)
          if (disc.contains(i, j)) region.set(i, j, true);
    }
    for (int k = 0; k < 200;) {
      const int i = static_cast<int>(rng.below(grid)), j = static_cast<int>(rng.below(grid));
      if (region.contains(i, j)) continue;
      if (region.contains(i + 1, j) || region.contains(i - 1, j) || region.contains(i, j + 1) || region.contains(i, j - 1)) {
        region.set(i, j, true);
        ++k;
      }
    }
    const double area = region.area();
    CHECK(perimeter(region, PerimeterMethod::polygon) >= 0.98 * 2.0 * std::sqrt(std::numbers::pi * area));
    CHECK(perimeter(region) >= 2.0 * std::sqrt(std::numbers::pi * area));
  }
}
