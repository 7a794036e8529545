#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace wulff {

struct Site {
  int x = 0;
  int y = 0;
  friend auto operator<=>(const Site&, const Site&) = default;
  friend Site operator+(Site a, Site b) { return {a.x + b.x, a.y + b.y}; }
  friend Site operator-(Site a, Site b) { return {a.x - b.x, a.y - b.y}; }
};

int linf_distance(Site a, Site b);

struct SiteHash {
  std::size_t operator()(Site s) const noexcept {
    return std::hash<std::uint64_t>{}((static_cast<std::uint64_t>(static_cast<std::uint32_t>(s.x)) << 32) |
                                      static_cast<std::uint32_t>(s.y));
  }
};

// Axis-aligned rectangle of sites [x0, x0+width) x [y0, y0+height).
struct Box {
  int x0 = 0;
  int y0 = 0;
  int width = 0;
  int height = 0;
  friend bool operator==(const Box&, const Box&) = default;
  bool contains(Site s) const {
    return s.x >= x0 && s.x < x0 + width && s.y >= y0 && s.y < y0 + height;
  }
  bool empty() const { return width <= 0 || height <= 0; }
  int area() const { return empty() ? 0 : width * height; }
  Box intersect(const Box& o) const;
};

enum class Orientation : std::uint8_t { horizontal, vertical };

// Edge of the box by site indices; a is the lower-left endpoint.
struct Edge {
  int a = 0;
  int b = 0;
};

// A point of Z^2 or of Z^2 + (1/2, 1/2), stored with doubled coordinates.
struct HalfPoint {
  int x2 = 0;
  int y2 = 0;
  friend auto operator<=>(const HalfPoint&, const HalfPoint&) = default;
  double x() const { return x2 / 2.0; }
  double y() const { return y2 / 2.0; }
};

// Unordered nearest-neighbour pair, normalized so a < b.
struct PrimalEdge {
  Site a;
  Site b;
  friend auto operator<=>(const PrimalEdge&, const PrimalEdge&) = default;
};

PrimalEdge make_primal_edge(Site a, Site b);  // throws on non-adjacent pairs

struct DualEdge {
  HalfPoint a;  // a < b
  HalfPoint b;
  PrimalEdge primal;
  friend auto operator<=>(const DualEdge&, const DualEdge&) = default;
};

DualEdge dual_edge(const PrimalEdge& e);
// The primal edge crossed by a dual edge given by two dual sites at distance 1.
PrimalEdge primal_of(HalfPoint a, HalfPoint b);

// The n x n box {0..n-1}^2 with its nearest-neighbour edges in canonical order:
// sites row-major, and at each site the edge to the right before the edge above.
class Lattice final {
 public:
  explicit Lattice(int n);

  int side() const { return n_; }
  int site_count() const { return n_ * n_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }

  int index(Site s) const { return s.y * n_ + s.x; }
  Site site(int i) const { return {i % n_, i / n_}; }
  bool contains(Site s) const { return s.x >= 0 && s.x < n_ && s.y >= 0 && s.y < n_; }
  Box bounds() const { return {0, 0, n_, n_}; }

  bool is_boundary(int i) const { return boundary_flag_[static_cast<std::size_t>(i)] != 0; }
  std::span<const int> boundary() const { return boundary_; }
  std::span<const int> interior() const { return interior_; }

  std::span<const Edge> edges() const { return edges_; }
  const Edge& edge(int e) const { return edges_[static_cast<std::size_t>(e)]; }
  Orientation orientation(int e) const {
    return edge(e).b == edge(e).a + 1 ? Orientation::horizontal : Orientation::vertical;
  }
  int right_edge(int i) const { return right_[static_cast<std::size_t>(i)]; }
  int up_edge(int i) const { return up_[static_cast<std::size_t>(i)]; }
  int left_edge(int i) const { return i % n_ == 0 ? -1 : right_edge(i - 1); }
  int down_edge(int i) const { return i < n_ ? -1 : up_edge(i - n_); }
  // -1 when the sites are not adjacent or not both inside.
  int edge_between(Site a, Site b) const;

  int neighbor_count(int i) const;

  // Calls f(neighbour_site_index, edge_index) for each of the up to 4 neighbours.
  template <class F>
  void for_each_neighbor(int i, F&& f) const {
    if (int e = right_edge(i); e >= 0) f(i + 1, e);
    if (int e = up_edge(i); e >= 0) f(i + n_, e);
    if (int e = left_edge(i); e >= 0) f(i - 1, e);
    if (int e = down_edge(i); e >= 0) f(i - n_, e);
  }

 private:
  int n_;
  std::vector<Edge> edges_;
  std::vector<int> right_;
  std::vector<int> up_;
  std::vector<std::uint8_t> boundary_flag_;
  std::vector<int> boundary_;
  std::vector<int> interior_;
};

Lattice build_box(int n);

// Components of the 8-neighbourhood graph on a finite site set.
struct LinfComponent {
  std::vector<Site> sites;  // sorted
  int diameter = 0;         // sup-norm diameter
};

std::vector<LinfComponent> linf_components(std::span<const Site> occupied);
int linf_diameter(std::span<const Site> sites);
// Sites at sup-norm distance <= r from the set (the set included), sorted.
std::vector<Site> linf_neighborhood(std::span<const Site> sites, int r);
// Sites outside A that are nearest-neighbour adjacent to A and joined to infinity
// through the complement of A. Sorted.
std::vector<Site> exterior_boundary(std::span<const Site> a);

// Block rescaling: block xb covers Lambda(K) + K*xb.
class BlockGrid final {
 public:
  BlockGrid(int k, std::vector<Site> index_set);

  int scale() const { return k_; }
  std::span<const Site> index_set() const { return index_set_; }
  std::size_t size() const { return index_set_.size(); }

  Box block(Site xb) const { return {k_ * xb.x, k_ * xb.y, k_, k_}; }
  // Union of the nine blocks at sup-distance <= 1.
  Box event_block(Site xb) const { return {k_ * (xb.x - 1), k_ * (xb.y - 1), 3 * k_, 3 * k_}; }
  static Site block_of(Site s, int k);

 private:
  int k_;
  std::vector<Site> index_set_;
};

BlockGrid blockify(std::span<const Site> region, int k);
BlockGrid blockify(const Lattice& lattice, int k);

}  // namespace wulff
