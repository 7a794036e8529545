#include <algorithm>
#include <cmath>
#include <string>

#include "wulff/droplet.hpp"
#include "wulff/dsu.hpp"
#include "wulff/errors.hpp"

namespace wulff {

namespace {

struct LargeCluster {
  std::vector<Site> coarse;  // blocks meeting the cluster, sorted
  int sign = 1;
};

// Open clusters merged through the boundary partition, keeping those of
// sup-diameter >= min_diameter.
std::vector<LargeCluster> large_clusters(const Lattice& lattice, const EdgeConfig& omega, const SpinConfig& sigma,
                                         int k, double min_diameter) {
  const ClusterSet clusters = label_clusters(lattice, omega);
  DisjointSets groups(clusters.cluster_count());
  const auto block_of = omega.bc.block_of_site(lattice);
  std::vector<int> first_in_block(static_cast<std::size_t>(omega.bc.block_count(lattice)), -1);
  for (int s = 0; s < lattice.site_count(); ++s) {
    const int b = block_of[static_cast<std::size_t>(s)];
    if (b < 0) continue;
    auto& first = first_in_block[static_cast<std::size_t>(b)];
    if (first < 0) {
      first = clusters.label[static_cast<std::size_t>(s)];
    } else {
      groups.unite(first, clusters.label[static_cast<std::size_t>(s)]);
    }
  }
  const int count = clusters.cluster_count();
  std::vector<int> lo_x(static_cast<std::size_t>(count), lattice.side()), hi_x(static_cast<std::size_t>(count), -1);
  std::vector<int> lo_y = lo_x, hi_y = hi_x, sign(static_cast<std::size_t>(count), 0);
  for (int s = 0; s < lattice.site_count(); ++s) {
    const auto g = static_cast<std::size_t>(groups.find(clusters.label[static_cast<std::size_t>(s)]));
    const Site site = lattice.site(s);
    lo_x[g] = std::min(lo_x[g], site.x), hi_x[g] = std::max(hi_x[g], site.x);
    lo_y[g] = std::min(lo_y[g], site.y), hi_y[g] = std::max(hi_y[g], site.y);
    const int spin = sigma.values[static_cast<std::size_t>(s)];
    if (sign[g] == 0) {
      sign[g] = spin;
    } else if (sign[g] != spin) {
      throw ConfigError("sigma is not constant on the open clusters of omega");
    }
  }
  std::vector<int> slot(static_cast<std::size_t>(count), -1);
  std::vector<LargeCluster> out;
  for (int g = 0; g < count; ++g) {
    const auto i = static_cast<std::size_t>(g);
    if (hi_x[i] < 0 || std::max(hi_x[i] - lo_x[i], hi_y[i] - lo_y[i]) < min_diameter) continue;
    slot[i] = static_cast<int>(out.size());
    out.push_back({{}, sign[i]});
  }
  for (int s = 0; s < lattice.site_count(); ++s) {
    const int g = groups.find(clusters.label[static_cast<std::size_t>(s)]);
    if (slot[static_cast<std::size_t>(g)] < 0) continue;
    out[static_cast<std::size_t>(slot[static_cast<std::size_t>(g)])].coarse.push_back(BlockGrid::block_of(lattice.site(s), k));
  }
  for (auto& c : out) {
    std::sort(c.coarse.begin(), c.coarse.end());
    c.coarse.erase(std::unique(c.coarse.begin(), c.coarse.end()), c.coarse.end());
  }
  return out;
}

// Flags on the nb x nb block grid.
class BlockMask final {
 public:
  explicit BlockMask(int side) : side_(side), bits_(static_cast<std::size_t>(side) * side, 0) {}
  int side() const { return side_; }
  bool inside(Site b) const { return b.x >= 0 && b.y >= 0 && b.x < side_ && b.y < side_; }
  bool get(Site b) const { return inside(b) && bits_[index(b)] != 0; }
  void set(Site b, bool on = true) { bits_[index(b)] = on ? 1 : 0; }
  bool on_rim(Site b) const { return b.x == 0 || b.y == 0 || b.x == side_ - 1 || b.y == side_ - 1; }
  std::vector<Site> sites(bool value) const {
    std::vector<Site> out;
    for (int y = 0; y < side_; ++y) {
      for (int x = 0; x < side_; ++x) {
        if ((bits_[index({x, y})] != 0) == value) out.push_back({x, y});
      }
    }
    return out;
  }

 private:
  std::size_t index(Site b) const { return static_cast<std::size_t>(b.y) * side_ + b.x; }
  int side_;
  std::vector<std::uint8_t> bits_;
};

// A together with the residual components of diameter < limit that avoid the rim.
std::vector<Site> fill_blocks(std::span<const Site> component, int side, double limit) {
  BlockMask mask(side);
  for (Site b : component) mask.set(b);
  std::vector<Site> out(component.begin(), component.end());
  for (const auto& residual : linf_components(mask.sites(false))) {
    if (residual.diameter >= limit) continue;
    if (std::any_of(residual.sites.begin(), residual.sites.end(), [&](Site b) { return mask.on_rim(b); })) continue;
    out.insert(out.end(), residual.sites.begin(), residual.sites.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

RoughMeasure rough_measure(const Lattice& lattice, const EdgeConfig& omega, const SpinConfig& sigma, int k,
                           std::span<const BlockEventParams> good_def, int threads) {
  const int n = lattice.side();
  const double log_n = std::log(static_cast<double>(n));
  if (k < 2) throw ConfigError("rough measure needs K >= 2");
  if (!(n > 6.0 * k * log_n)) throw ConfigError("rough measure needs n > 6 K log n");
  if (sigma.values.size() != static_cast<std::size_t>(lattice.site_count())) {
    throw ConfigError("spin configuration does not match the lattice");
  }
  std::vector<BlockEventParams> regular_def;
  if (good_def.empty()) {
    regular_def.push_back({BlockEvent::regular, k, 0.1, 1.0});
    good_def = regular_def;
  }
  const BlockField field = block_field(lattice, omega, &sigma, k, good_def, threads);
  const int side = (n + k - 1) / k;
  BlockMask good(side);
  for (std::size_t i = 0; i < field.good.size(); ++i) {
    if (field.good[i]) good.set(field.grid.index_set()[i]);
  }
  const auto components = linf_components(good.sites(true));
  std::vector<int> component_of(static_cast<std::size_t>(side * side), -1);
  for (std::size_t c = 0; c < components.size(); ++c) {
    for (Site b : components[c].sites) component_of[static_cast<std::size_t>(b.y * side + b.x)] = static_cast<int>(c);
  }

  const auto clusters = large_clusters(lattice, omega, sigma, k, k * log_n);
  RoughMeasure out;
  out.large_clusters = static_cast<int>(clusters.size());
  std::vector<std::vector<Site>> filled(components.size());
  std::vector<int> owner(static_cast<std::size_t>(side * side), -1);
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    std::vector<int> touched;
    for (Site b : clusters[c].coarse) {
      const int a = component_of[static_cast<std::size_t>(b.y * side + b.x)];
      if (a >= 0) touched.push_back(a);
    }
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    std::vector<Site> hull;
    for (int a : touched) {
      auto& f = filled[static_cast<std::size_t>(a)];
      if (f.empty()) f = fill_blocks(components[static_cast<std::size_t>(a)].sites, side, log_n);
      hull.insert(hull.end(), f.begin(), f.end());
    }
    std::sort(hull.begin(), hull.end());
    hull.erase(std::unique(hull.begin(), hull.end()), hull.end());
    for (Site b : hull) {
      auto& o = owner[static_cast<std::size_t>(b.y * side + b.x)];
      if (o >= 0) {
        throw AlgorithmError("hulls of two large clusters overlap",
                             "block (" + std::to_string(b.x) + "," + std::to_string(b.y) + ") clusters " +
                                 std::to_string(o) + " and " + std::to_string(c));
      }
      o = static_cast<int>(c);
    }
    out.hulls.push_back(std::move(hull));
  }

  // Frame Q \ Lambda(1 - 6K/n): the site cells within 3K of the sides.
  const int frame = 3 * k;
  auto in_frame = [&](int x, int y) { return std::min({x, y, n - 1 - x, n - 1 - y}) < frame; };
  out.plus = DiscreteRegion(n);
  out.minus = DiscreteRegion(n);
  out.measure = SignedMeasure(n);
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) {
      const int o = owner[static_cast<std::size_t>((y / k) * side + x / k)];
      const bool frame_cell = in_frame(x, y);
      const bool plus = frame_cell || (o >= 0 && clusters[static_cast<std::size_t>(o)].sign > 0);
      const bool minus = !frame_cell && o >= 0 && clusters[static_cast<std::size_t>(o)].sign < 0;
      out.plus.set(x, y, plus);
      out.minus.set(x, y, minus);
      out.measure.density(x, y) = minus ? -1.0 : 1.0;
    }
  }

  // F-hat: bad components meeting the inner box Lambda(n - 6 K log n) and the
  // outer boundary of some hull (of the coarse cluster when the hull is empty).
  const double inner = n - 6.0 * k * log_n;
  BlockMask near_inner(side), near_hull(side);
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) {
      if (std::abs(x + 0.5 - n / 2.0) <= inner / 2.0 && std::abs(y + 0.5 - n / 2.0) <= inner / 2.0) {
        near_inner.set({x / k, y / k});
      }
    }
  }
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    const auto& hull = out.hulls[c];
    if (hull.empty()) {
      for (Site b : clusters[c].coarse) near_hull.set(b);
      continue;
    }
    for (Site b : linf_neighborhood(hull, 1)) {
      if (near_hull.inside(b) && owner[static_cast<std::size_t>(b.y * side + b.x)] != static_cast<int>(c)) near_hull.set(b);
    }
  }
  for (const auto& component : linf_components(good.sites(false))) {
    const auto meets = [&](const BlockMask& m) {
      return std::any_of(component.sites.begin(), component.sites.end(), [&](Site b) { return m.get(b); });
    };
    if (!meets(near_inner) || !meets(near_hull)) continue;
    out.bad.push_back({component.sites, static_cast<int>(component.sites.size()), component.diameter});
    out.bad_blocks += static_cast<int>(component.sites.size());
  }
  std::stable_sort(out.bad.begin(), out.bad.end(), [](const BadComponent& a, const BadComponent& b) { return a.size > b.size; });
  out.perimeter_bound = 16.0 + 8.0 * k / n * out.bad_blocks;
  return out;
}

double contiguity_distance(const SpinConfig& sigma, const RoughMeasure& rough, double mstar) {
  return weak_distance(sigma_measure(sigma, mstar, rough.measure.grid()), rough.measure);
}

}  // namespace wulff
