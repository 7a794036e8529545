#include "wulff/lattice.hpp"

#include <algorithm>
#include <cstdlib>
#include <queue>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "wulff/errors.hpp"

namespace wulff {

int linf_distance(Site a, Site b) { return std::max(std::abs(a.x - b.x), std::abs(a.y - b.y)); }

Box Box::intersect(const Box& o) const {
  const int lx = std::max(x0, o.x0);
  const int ly = std::max(y0, o.y0);
  const int hx = std::min(x0 + width, o.x0 + o.width);
  const int hy = std::min(y0 + height, o.y0 + o.height);
  return {lx, ly, std::max(0, hx - lx), std::max(0, hy - ly)};
}

PrimalEdge make_primal_edge(Site a, Site b) {
  if (std::abs(a.x - b.x) + std::abs(a.y - b.y) != 1) {
    throw std::invalid_argument("sites are not nearest neighbours");
  }
  return a < b ? PrimalEdge{a, b} : PrimalEdge{b, a};
}

DualEdge dual_edge(const PrimalEdge& e) {
  const PrimalEdge p = make_primal_edge(e.a, e.b);
  const int mx = p.a.x + p.b.x;
  const int my = p.a.y + p.b.y;
  HalfPoint u, v;
  if (p.a.y == p.b.y) {
    u = {mx, my - 1};
    v = {mx, my + 1};
  } else {
    u = {mx - 1, my};
    v = {mx + 1, my};
  }
  if (v < u) std::swap(u, v);
  return {u, v, p};
}

PrimalEdge primal_of(HalfPoint a, HalfPoint b) {
  const bool dual_sites = (a.x2 & 1) && (a.y2 & 1) && (b.x2 & 1) && (b.y2 & 1);
  if (!dual_sites || std::abs(a.x2 - b.x2) + std::abs(a.y2 - b.y2) != 2) {
    throw std::invalid_argument("not a dual edge");
  }
  const int mx = a.x2 + b.x2;  // four times the midpoint
  const int my = a.y2 + b.y2;
  if (a.y2 == b.y2) {
    // Horizontal dual edge crosses a vertical primal edge.
    const Site lo{mx / 4, (my - 2) / 4};
    return make_primal_edge(lo, {lo.x, lo.y + 1});
  }
  const Site lo{(mx - 2) / 4, my / 4};
  return make_primal_edge(lo, {lo.x + 1, lo.y});
}

Lattice::Lattice(int n) : n_(n) {
  if (n < 2) throw ConfigError("box side must be at least 2");
  const int sites = n * n;
  right_.assign(static_cast<std::size_t>(sites), -1);
  up_.assign(static_cast<std::size_t>(sites), -1);
  edges_.reserve(static_cast<std::size_t>(2 * n * (n - 1)));
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) {
      const int i = y * n + x;
      if (x + 1 < n) {
        right_[static_cast<std::size_t>(i)] = static_cast<int>(edges_.size());
        edges_.push_back({i, i + 1});
      }
      if (y + 1 < n) {
        up_[static_cast<std::size_t>(i)] = static_cast<int>(edges_.size());
        edges_.push_back({i, i + n});
      }
    }
  }
  boundary_flag_.assign(static_cast<std::size_t>(sites), 0);
  for (int i = 0; i < sites; ++i) {
    if (neighbor_count(i) < 4) {
      boundary_flag_[static_cast<std::size_t>(i)] = 1;
      boundary_.push_back(i);
    } else {
      interior_.push_back(i);
    }
  }
}

int Lattice::neighbor_count(int i) const {
  int c = 0;
  for_each_neighbor(i, [&](int, int) { ++c; });
  return c;
}

int Lattice::edge_between(Site a, Site b) const {
  if (!contains(a) || !contains(b)) return -1;
  if (std::abs(a.x - b.x) + std::abs(a.y - b.y) != 1) return -1;
  if (b < a) std::swap(a, b);
  return a.y == b.y ? right_edge(index(a)) : up_edge(index(a));
}

Lattice build_box(int n) { return Lattice(n); }

int linf_diameter(std::span<const Site> sites) {
  if (sites.empty()) return 0;
  int lx = sites[0].x, hx = lx, ly = sites[0].y, hy = ly;
  for (Site s : sites) {
    lx = std::min(lx, s.x);
    hx = std::max(hx, s.x);
    ly = std::min(ly, s.y);
    hy = std::max(hy, s.y);
  }
  return std::max(hx - lx, hy - ly);
}

std::vector<LinfComponent> linf_components(std::span<const Site> occupied) {
  std::vector<Site> sorted(occupied.begin(), occupied.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::unordered_map<Site, int, SiteHash> where;
  where.reserve(sorted.size() * 2);
  for (std::size_t i = 0; i < sorted.size(); ++i) where.emplace(sorted[i], static_cast<int>(i));

  std::vector<int> comp(sorted.size(), -1);
  std::vector<LinfComponent> out;
  std::vector<int> stack;
  for (std::size_t s = 0; s < sorted.size(); ++s) {
    if (comp[s] >= 0) continue;
    const int id = static_cast<int>(out.size());
    out.emplace_back();
    comp[s] = id;
    stack.assign(1, static_cast<int>(s));
    while (!stack.empty()) {
      const int cur = stack.back();
      stack.pop_back();
      out.back().sites.push_back(sorted[static_cast<std::size_t>(cur)]);
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          if (dx == 0 && dy == 0) continue;
          auto it = where.find(sorted[static_cast<std::size_t>(cur)] + Site{dx, dy});
          if (it != where.end() && comp[static_cast<std::size_t>(it->second)] < 0) {
            comp[static_cast<std::size_t>(it->second)] = id;
            stack.push_back(it->second);
          }
        }
      }
    }
    std::sort(out.back().sites.begin(), out.back().sites.end());
    out.back().diameter = linf_diameter(out.back().sites);
  }
  return out;
}

std::vector<Site> linf_neighborhood(std::span<const Site> sites, int r) {
  std::unordered_set<Site, SiteHash> seen;
  for (Site s : sites) {
    for (int dy = -r; dy <= r; ++dy) {
      for (int dx = -r; dx <= r; ++dx) seen.insert(s + Site{dx, dy});
    }
  }
  std::vector<Site> out(seen.begin(), seen.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Site> exterior_boundary(std::span<const Site> a) {
  if (a.empty()) return {};
  int lx = a[0].x, hx = lx, ly = a[0].y, hy = ly;
  for (Site s : a) {
    lx = std::min(lx, s.x);
    hx = std::max(hx, s.x);
    ly = std::min(ly, s.y);
    hy = std::max(hy, s.y);
  }
  // Frame one site wider than the bounding box; its rim is joined to infinity.
  lx -= 1;
  ly -= 1;
  hx += 1;
  hy += 1;
  const int w = hx - lx + 1;
  const int h = hy - ly + 1;
  auto idx = [&](Site s) { return (s.y - ly) * w + (s.x - lx); };
  std::vector<std::uint8_t> in_a(static_cast<std::size_t>(w * h), 0);
  for (Site s : a) in_a[static_cast<std::size_t>(idx(s))] = 1;
  std::vector<std::uint8_t> outside(static_cast<std::size_t>(w * h), 0);
  std::queue<Site> q;
  for (int y = ly; y <= hy; ++y) {
    for (int x = lx; x <= hx; ++x) {
      if (x == lx || x == hx || y == ly || y == hy) {
        outside[static_cast<std::size_t>(idx({x, y}))] = 1;
        q.push({x, y});
      }
    }
  }
  const Site steps[4] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  while (!q.empty()) {
    const Site s = q.front();
    q.pop();
    for (Site d : steps) {
      const Site t = s + d;
      if (t.x < lx || t.x > hx || t.y < ly || t.y > hy) continue;
      const auto k = static_cast<std::size_t>(idx(t));
      if (in_a[k] || outside[k]) continue;
      outside[k] = 1;
      q.push(t);
    }
  }
  std::vector<Site> out;
  for (int y = ly; y <= hy; ++y) {
    for (int x = lx; x <= hx; ++x) {
      if (!outside[static_cast<std::size_t>(idx({x, y}))]) continue;
      for (Site d : steps) {
        const Site t = Site{x, y} + d;
        if (t.x < lx || t.x > hx || t.y < ly || t.y > hy) continue;
        if (in_a[static_cast<std::size_t>(idx(t))]) {
          out.push_back({x, y});
          break;
        }
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

BlockGrid::BlockGrid(int k, std::vector<Site> index_set) : k_(k), index_set_(std::move(index_set)) {
  if (k < 1) throw ConfigError("block scale must be positive");
}

Site BlockGrid::block_of(Site s, int k) {
  auto fdiv = [](int a, int b) { return a >= 0 ? a / b : -((-a + b - 1) / b); };
  return {fdiv(s.x, k), fdiv(s.y, k)};
}

BlockGrid blockify(std::span<const Site> region, int k) {
  if (k < 1) throw ConfigError("block scale must be positive");
  std::vector<Site> idx;
  idx.reserve(region.size());
  for (Site s : region) idx.push_back(BlockGrid::block_of(s, k));
  // Order by row then column, matching the canonical site order.
  std::sort(idx.begin(), idx.end(), [](Site a, Site b) { return a.y != b.y ? a.y < b.y : a.x < b.x; });
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  return BlockGrid(k, std::move(idx));
}

BlockGrid blockify(const Lattice& lattice, int k) {
  if (k < 1) throw ConfigError("block scale must be positive");
  const int nb = (lattice.side() + k - 1) / k;
  std::vector<Site> idx;
  idx.reserve(static_cast<std::size_t>(nb * nb));
  for (int y = 0; y < nb; ++y) {
    for (int x = 0; x < nb; ++x) idx.push_back({x, y});
  }
  return BlockGrid(k, std::move(idx));
}

}  // namespace wulff
