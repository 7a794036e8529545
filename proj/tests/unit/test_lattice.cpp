#include <algorithm>
#include <set>

#include "doctest.h"
#include "wulff/lattice.hpp"
#include "wulff/rng.hpp"

using namespace wulff;

TEST_CASE("box counts") {
  struct Expected {
    int n, sites, edges, boundary;
  };
  for (const auto& e : {Expected{2, 4, 4, 4}, Expected{3, 9, 12, 8}, Expected{4, 16, 24, 12}}) {
    const Lattice lattice(e.n);
    CHECK(lattice.site_count() == e.sites);
    CHECK(lattice.edge_count() == e.edges);
    CHECK(static_cast<int>(lattice.boundary().size()) == e.boundary);
  }
}

TEST_CASE("edge count oracle by brute-force pair enumeration") {
  for (int n = 2; n <= 7; ++n) {
    const Lattice lattice(n);
    int pairs = 0;
    for (int a = 0; a < lattice.site_count(); ++a) {
      for (int b = a + 1; b < lattice.site_count(); ++b) {
        const Site sa = lattice.site(a), sb = lattice.site(b);
        if (std::abs(sa.x - sb.x) + std::abs(sa.y - sb.y) == 1) {
          ++pairs;
          CHECK(lattice.edge_between(sa, sb) >= 0);
        }
      }
    }
    CHECK(lattice.edge_count() == pairs);
  }
}

TEST_CASE("boundary sites are those with fewer than four neighbours") {
  const Lattice lattice(6);
  for (int i = 0; i < lattice.site_count(); ++i) CHECK(lattice.is_boundary(i) == (lattice.neighbor_count(i) < 4));
}

TEST_CASE("dual edges") {
  const DualEdge h = dual_edge(make_primal_edge({0, 0}, {1, 0}));
  CHECK(h.a == HalfPoint{1, -1});
  CHECK(h.b == HalfPoint{1, 1});
  const DualEdge v = dual_edge(make_primal_edge({0, 0}, {0, 1}));
  CHECK(v.a == HalfPoint{-1, 1});
  CHECK(v.b == HalfPoint{1, 1});
  const Lattice lattice(5);
  for (const Edge& e : lattice.edges()) {
    const PrimalEdge primal = make_primal_edge(lattice.site(e.a), lattice.site(e.b));
    const DualEdge dual = dual_edge(primal);
    CHECK(primal_of(dual.a, dual.b) == primal);
  }
  CHECK_THROWS(make_primal_edge({0, 0}, {1, 1}));
}

TEST_CASE("linf components") {
  const std::vector<Site> diagonal{{0, 0}, {1, 1}};
  CHECK(linf_components(diagonal).size() == 1);
  const std::vector<Site> apart{{0, 0}, {2, 0}};
  CHECK(linf_components(apart).size() == 2);
  CHECK(linf_components({}).empty());
}

TEST_CASE("blockify") {
  CHECK(blockify(Lattice(8), 4).size() == 4);
  CHECK(blockify(Lattice(4), 8).size() == 1);
  const Lattice lattice(5);
  std::vector<Site> region;
  for (int i = 0; i < lattice.site_count(); ++i) region.push_back(lattice.site(i));
  const BlockGrid grid = blockify(region, 1);
  std::vector<Site> index(grid.index_set().begin(), grid.index_set().end());
  std::sort(index.begin(), index.end());
  std::sort(region.begin(), region.end());
  CHECK(index == region);
}

namespace {

// Flood fill from outside a padded bounding box: sites of the complement reachable
// from infinity that touch A.
std::vector<Site> exterior_oracle(const std::set<Site>& a) {
  int lo_x = 0, hi_x = 0, lo_y = 0, hi_y = 0;
  bool first = true;
  for (Site s : a) {
    if (first) lo_x = hi_x = s.x, lo_y = hi_y = s.y, first = false;
    lo_x = std::min(lo_x, s.x), hi_x = std::max(hi_x, s.x), lo_y = std::min(lo_y, s.y), hi_y = std::max(hi_y, s.y);
  }
  lo_x -= 2, lo_y -= 2, hi_x += 2, hi_y += 2;
  std::set<Site> outside{{lo_x, lo_y}};
  std::vector<Site> stack{{lo_x, lo_y}};
  const Site steps[] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  while (!stack.empty()) {
    const Site s = stack.back();
    stack.pop_back();
    for (Site d : steps) {
      const Site t = s + d;
      if (t.x < lo_x || t.x > hi_x || t.y < lo_y || t.y > hi_y || a.contains(t) || outside.contains(t)) continue;
      outside.insert(t);
      stack.push_back(t);
    }
  }
  std::vector<Site> out;
  for (Site s : outside) {
    for (Site d : steps) {
      if (a.contains(s + d)) {
        out.push_back(s);
        break;
      }
    }
  }
  return out;
}

}  // namespace

TEST_CASE("exterior boundary of a 4-connected set is L-inf connected") {
  RngStream rng(21, 0);
  for (int trial = 0; trial < 300; ++trial) {
    // Random 4-connected set grown from the origin.
    std::set<Site> a{{0, 0}};
    std::vector<Site> grown{{0, 0}};
    const int size = 1 + static_cast<int>(rng.below(40));
    const Site steps[] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    while (static_cast<int>(a.size()) < size) {
      const Site from = grown[rng.below(grown.size())];
      const Site to = from + steps[rng.below(4)];
      if (a.insert(to).second) grown.push_back(to);
    }
    const std::vector<Site> set(a.begin(), a.end());
    const auto boundary = exterior_boundary(set);
    CHECK(boundary == exterior_oracle(a));
    CHECK(linf_components(boundary).size() == 1);
  }
}
