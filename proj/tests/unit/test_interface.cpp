#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "wulff/errors.hpp"
#include "wulff/experiments.hpp"
#include "wulff/interface.hpp"

using namespace wulff;

namespace {

// The randomized-instance geometry: n = 48, a 30 x 12 separation rectangle.
SepGeometry stress_geometry() { return build_sep_geometry(48, {0.0, 0.0}, 0.45, {0, 1}, 0.125, 0.3125); }

struct LocalBuilder {
  const Lattice& lattice;
  const SepGeometry& geometry;
  EdgeConfig omega;

  LocalBuilder(const Lattice& l, const SepGeometry& g, bool open)
      : lattice(l), geometry(g), omega(EdgeConfig::uniform(l, open, BoundaryCondition::free())) {}
  void set(int u0, int v0, int u1, int v1, bool open) {
    const int e = lattice.edge_between(geometry.global(u0, v0), geometry.global(u1, v1));
    REQUIRE(e >= 0);
    omega.open[static_cast<std::size_t>(e)] = open ? 1 : 0;
  }
  void open_row(int v, int u0, int u1) {
    for (int u = u0; u < u1; ++u) set(u, v, u + 1, v, true);
  }
  void open_column(int u, int v0, int v1) {
    for (int v = v0; v < v1; ++v) set(u, v, u, v + 1, true);
  }
};

}  // namespace

TEST_CASE("separation geometry") {
  const SepGeometry g = build_sep_geometry(100, {0.0, 0.0}, 0.3, {0, 1}, 0.05, 0.2);
  CHECK(std::abs(g.cols - 40) <= 2);
  CHECK(std::abs(g.rows - 10) <= 2);
  const auto top = g.top_boundary(), bottom = g.bottom_boundary();
  CHECK(top.front() == g.a_plus());
  CHECK(top.back() == g.b_plus());
  CHECK(bottom.front() == g.a_minus());
  CHECK(bottom.back() == g.b_minus());
  CHECK_THROWS_AS(build_sep_geometry(100, {0.0, 0.0}, 0.3, {0, 1}, 0.06, 0.28), ConfigError);
  CHECK_THROWS_AS(build_sep_geometry(100, {0.3, 0.0}, 0.3, {0, 1}, 0.05, 0.2), ConfigError);
  CHECK_THROWS_AS(build_sep_geometry(100, {0.0, 0.0}, 0.3, {1, 1}, 0.05, 0.2), ConfigError);
}

TEST_CASE("empty domain: plain dual reachability") {
  const Lattice lattice(48);
  const SepGeometry g = stress_geometry();
  const LocalBuilder closed(lattice, g, false);
  const SepDomain domain(lattice, closed.omega, g);
  CHECK(domain.crossing().empty());
  CHECK(sep_check(domain, {}, 0.01, 1.0));
  const auto witness = sep_search(domain, 0.01, 1.0);
  REQUIRE(witness);
  CHECK(witness->partition.empty());
  const auto path = dual_crossing(domain);
  REQUIRE(path);
  const CutHeights cuts = select_cut_heights(domain, {}, {}, 0.01);
  CHECK(cuts.bad_count() == 0);
  const InterfaceResult result = extract_interface(domain, cuts, 2, 0.01);
  CHECK(result.count() == 1);
  CHECK(result.paths[0].sites.size() == path->sites.size());
  CHECK(result.diameter_ok);
  CHECK(result.budget_ok);
  const double h = 0.125 * 48 / 2;
  CHECK(count_big_dual_clusters(domain, h, 2) == 1);
  CHECK(count_big_dual_clusters(domain, -h, 2) == 1);
  CHECK_THROWS(count_big_dual_clusters(domain, 0.0, 2));

  const SeparatedInterface separated = separate_interface(result, 1.0, g, 0.05);
  CHECK(separated.gammas.size() == 1);
  CHECK(separated.eq13_holds);
  CHECK(separated.upsilon_holds);
  CHECK_THROWS_AS(separate_interface(result, 3.0, g, 0.05), ConfigError);
}

TEST_CASE("paths shorter than the separation width are dropped") {
  const SepGeometry g = stress_geometry();
  InterfaceResult result;
  result.paths.push_back({{{3, 4}, {4, 4}}, 1.0});
  result.diameter_sum = 1.0;
  const SeparatedInterface separated = separate_interface(result, 2.0, g, 0.1);
  CHECK(separated.gammas.empty());
  CHECK_FALSE(separated.eq13_holds);
}

TEST_CASE("saturated domain: no decomposition at small delta") {
  const Lattice lattice(48);
  const SepGeometry g = stress_geometry();
  const LocalBuilder open(lattice, g, true);
  const SepDomain domain(lattice, open.omega, g);
  REQUIRE(domain.crossing().size() == 1);
  const std::vector<std::uint8_t> minus{1}, plus{0};
  CHECK_FALSE(sep_check(domain, minus, 0.001, 1.0));
  CHECK_FALSE(sep_check(domain, plus, 0.001, 1.0));
  CHECK_FALSE(sep_search(domain, 0.001, 1.0).has_value());
  CHECK(count_big_dual_clusters(domain, 3.0, 2) == 0);
  CHECK_FALSE(dual_crossing(domain).has_value());
}

TEST_CASE("two-band instance") {
  const Lattice lattice(48);
  const SepGeometry g = stress_geometry();
  const int cols = g.cols, rows = g.rows;
  LocalBuilder b(lattice, g, false);
  // Minus cluster: bottom band plus the left column; plus cluster: top band plus the right column.
  for (int v : {0, 1}) b.open_row(v, 0, cols - 3);
  b.open_column(0, 0, rows - 1);
  for (int u = 1; u <= cols - 3; ++u) b.set(u, 0, u, 1, true);
  for (int v : {rows - 2, rows - 1}) b.open_row(v, 2, cols - 1);
  b.open_column(cols - 1, 0, rows - 1);
  for (int u = 2; u < cols - 1; ++u) b.set(u, rows - 2, u, rows - 1, true);
  const SepDomain domain(lattice, b.omega, g);
  REQUIRE(domain.crossing().size() == 2);
  CHECK(domain.label(0, rows - 1) == domain.crossing()[0]);

  // Hand count: the natural partition only pays for the two columns.
  long long minus_up = 0, plus_down = 0;
  for (int v = 0; v < rows; ++v) {
    minus_up += domain.in_plus(0, v) ? 1 : 0;
    plus_down += domain.in_minus(cols - 1, v) ? 1 : 0;
  }
  const std::vector<std::uint8_t> natural{1, 0}, swapped{0, 1};
  const SepSums sums = sep_sums(domain, natural, 0.01, 1.0);
  CHECK(sums.minus_in_plus == minus_up);
  CHECK(sums.plus_in_minus == plus_down);
  CHECK(sums.holds());
  CHECK_FALSE(sep_check(domain, swapped, 0.01, 1.0));
  const auto witness = sep_search(domain, 0.01, 1.0);
  REQUIRE(witness);
  CHECK(witness->partition == natural);
  CHECK_FALSE(witness->heuristic);

  std::vector<FilledCluster> fills;
  for (int c : domain.crossing()) fills.push_back(fill_cluster(domain, c, 2));
  const CutHeights cuts = select_cut_heights(domain, fills, natural, 0.01);
  CHECK(cuts.bad_count() <= 2);
  const InterfaceResult result = extract_interface(domain, cuts, 2, 0.01, fills);
  CHECK(result.count() <= 2);
  CHECK(result.diameter_ok);
  CHECK(result.count_ok);
  CHECK(result.budget_ok);
  CHECK(result.monotone);
  const auto trace = trace_lines(domain, result);
  REQUIRE_FALSE(trace.empty());
  for (const auto& line : trace) {
    const bool known = line.starts_with("tunnel ") || line.starts_with("hole ") || line.starts_with("open-path ");
    CHECK(known);
  }
}

TEST_CASE("hole filling of a 3x3 circuit") {
  const Lattice lattice(48);
  const SepGeometry g = stress_geometry();
  LocalBuilder b(lattice, g, false);
  b.open_row(4, 10, 12);
  b.open_row(6, 10, 12);
  b.open_column(10, 4, 6);
  b.open_column(12, 4, 6);
  b.open_row(9, 3, 8);
  const SepDomain domain(lattice, b.omega, g);
  const int ring = domain.label(10, 4);
  const int centre = domain.site_index(11, 5);

  const FilledCluster small = fill_cluster(domain, ring, 1);
  REQUIRE(small.holes.size() == 1);
  CHECK_FALSE(small.holes[0].filled);
  CHECK(small.sites[static_cast<std::size_t>(centre)] == 0);

  const FilledCluster large = fill_cluster(domain, ring, 2);
  REQUIRE(large.holes.size() == 1);
  CHECK(large.holes[0].filled);
  CHECK(large.holes[0].diameter < 2);
  CHECK(large.sites[static_cast<std::size_t>(centre)] == 1);
  CHECK(large.edges[static_cast<std::size_t>(domain.horizontal_edge(10, 5))] == 1);
  for (std::size_t i = 0; i < small.sites.size(); ++i) CHECK(large.sites[i] >= small.sites[i]);
  for (std::size_t i = 0; i < small.edges.size(); ++i) CHECK(large.edges[i] >= small.edges[i]);

  // A segment has no holes: its fill is itself.
  const int segment = domain.label(3, 9);
  const FilledCluster line = fill_cluster(domain, segment, 5);
  CHECK(line.holes.empty());
  for (int v = 0; v < domain.rows(); ++v) {
    for (int u = 0; u < domain.cols(); ++u) {
      CHECK((line.sites[static_cast<std::size_t>(domain.site_index(u, v))] != 0) == (domain.label(u, v) == segment));
    }
  }
}

TEST_CASE("Upsilon membership") {
  const std::vector<double> five{5.0, 5.0};
  CHECK(in_upsilon(five, 1.0, 9.0));
  CHECK(in_upsilon(five, 1.0, 14.0));
  CHECK_FALSE(in_upsilon(five, 1.0, 14.5));
  const std::vector<double> short_first{0.5, 9.5};
  CHECK_FALSE(in_upsilon(short_first, 1.0, 0.0));
}

TEST_CASE("big dual clusters crossing a cut") {
  const Lattice lattice(48);
  const SepGeometry g = stress_geometry();
  LocalBuilder b(lattice, g, true);
  for (int v = 0; v < g.rows; ++v) {
    b.set(5, v, 6, v, false);
    b.set(20, v, 21, v, false);
  }
  const SepDomain domain(lattice, b.omega, g);
  CHECK(count_big_dual_clusters(domain, 3.0, 2) == 2);
  CHECK(count_big_dual_clusters(domain, -3.0, 2) == 2);
}

TEST_CASE("wall event") {
  const Lattice lattice(16);
  // Dual row y = 7.5 from x = 1.5 to x = 13.5; its steps cross the edges (x,7)-(x,8).
  const HalfPoint start{3, 15}, target{27, 15};
  auto omega = EdgeConfig::uniform(lattice, true, BoundaryCondition::wired());
  auto set = [&](Site a, Site b, bool open) {
    omega.open[static_cast<std::size_t>(lattice.edge_between(a, b))] = open ? 1 : 0;
  };
  CHECK_FALSE(wall_check(lattice, omega, start, target, 2.0));
  for (int x = 2; x <= 13; ++x) set({x, 7}, {x, 8}, false);
  CHECK(wall_check(lattice, omega, start, target, 1.0));
  // Block the straight segment at x = 8 and open a detour reaching y = 11.5.
  set({8, 7}, {8, 8}, true);
  CHECK_FALSE(wall_check(lattice, omega, start, target, 1.0));
  for (int y = 8; y <= 11; ++y) {
    set({7, y}, {8, y}, false);
    set({8, y}, {9, y}, false);
  }
  set({8, 11}, {8, 12}, false);
  CHECK_FALSE(wall_check(lattice, omega, start, target, 1.0));
  CHECK(wall_check(lattice, omega, start, target, 5.0));
  CHECK_THROWS_AS(wall_cut_graph(lattice, {2, 15}, target, 1.0), ConfigError);
}

TEST_CASE("randomized separation instances") {
  InterfaceStressParams params;
  params.instances = 300;
  const InterfaceStress stress = interface_stress(params, RngStream(51, 0));
  CHECK(stress.instances == 300);
  CHECK(stress.errors == 0);
  CHECK(stress.failures() == 0);
  CHECK(stress.oracle_checked > 0);
  CHECK(stress.oracle_mismatches == 0);
  CHECK(stress.with_crossing > 0);
}
