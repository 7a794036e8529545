#include "wulff/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wulff/dsu.hpp"
#include "wulff/errors.hpp"

namespace wulff {

BoundaryCondition BoundaryCondition::partition(std::vector<std::vector<int>> blocks) {
  for (const auto& b : blocks) {
    if (b.empty()) throw ConfigError("partition blocks must be nonempty");
  }
  return BoundaryCondition(Kind::partition, std::move(blocks));
}

std::vector<int> BoundaryCondition::block_of_site(const Lattice& lattice) const {
  std::vector<int> out(static_cast<std::size_t>(lattice.site_count()), -1);
  switch (kind_) {
    case Kind::free:
      break;
    case Kind::wired:
      for (int s : lattice.boundary()) out[static_cast<std::size_t>(s)] = 0;
      break;
    case Kind::partition:
      for (std::size_t b = 0; b < blocks_.size(); ++b) {
        for (int s : blocks_[b]) out[static_cast<std::size_t>(s)] = static_cast<int>(b);
      }
      break;
  }
  return out;
}

int BoundaryCondition::block_count(const Lattice&) const {
  switch (kind_) {
    case Kind::free:
      return 0;
    case Kind::wired:
      return 1;
    case Kind::partition:
      return static_cast<int>(blocks_.size());
  }
  return 0;
}

void BoundaryCondition::validate(const Lattice& lattice) const {
  if (kind_ != Kind::partition) return;
  std::vector<int> seen(static_cast<std::size_t>(lattice.site_count()), 0);
  for (const auto& b : blocks_) {
    for (int s : b) {
      if (s < 0 || s >= lattice.site_count() || !lattice.is_boundary(s)) {
        throw ConfigError("partition block contains a non-boundary site");
      }
      if (seen[static_cast<std::size_t>(s)]++) throw ConfigError("partition blocks overlap");
    }
  }
  for (int s : lattice.boundary()) {
    if (!seen[static_cast<std::size_t>(s)]) throw ConfigError("partition does not cover the boundary");
  }
}

SpinConfig SpinConfig::uniform(const Lattice& lattice, std::int8_t value, SpinBoundary bc) {
  SpinConfig s{lattice.side(), bc, std::vector<std::int8_t>(static_cast<std::size_t>(lattice.site_count()), value)};
  if (bc == SpinBoundary::plus) {
    for (int b : lattice.boundary()) s.values[static_cast<std::size_t>(b)] = 1;
  }
  return s;
}

long long SpinConfig::total() const {
  long long t = 0;
  for (auto v : values) t += v;
  return t;
}

EdgeConfig EdgeConfig::uniform(const Lattice& lattice, bool open, BoundaryCondition bc) {
  return {lattice.side(), std::move(bc),
          std::vector<std::uint8_t>(static_cast<std::size_t>(lattice.edge_count()), open ? 1 : 0)};
}

int EdgeConfig::open_count() const {
  return static_cast<int>(std::count(open.begin(), open.end(), std::uint8_t{1}));
}

ClusterSet label_clusters(const Lattice& lattice, std::span<const std::uint8_t> open,
                          const BoundaryCondition& bc) {
  if (static_cast<int>(open.size()) != lattice.edge_count()) {
    throw std::invalid_argument("edge configuration does not match the lattice");
  }
  const int sites = lattice.site_count();
  DisjointSets dsu(sites);
  for (int e = 0; e < lattice.edge_count(); ++e) {
    if (open[static_cast<std::size_t>(e)]) dsu.unite(lattice.edge(e).a, lattice.edge(e).b);
  }
  ClusterSet cs;
  cs.label.assign(static_cast<std::size_t>(sites), -1);
  std::vector<int> root_label(static_cast<std::size_t>(sites), -1);
  for (int s = 0; s < sites; ++s) {
    const int r = dsu.find(s);
    int& l = root_label[static_cast<std::size_t>(r)];
    if (l < 0) {
      l = cs.cluster_count();
      cs.sizes.push_back(0);
      cs.touches_boundary.push_back(0);
    }
    cs.label[static_cast<std::size_t>(s)] = l;
    ++cs.sizes[static_cast<std::size_t>(l)];
    if (lattice.is_boundary(s)) cs.touches_boundary[static_cast<std::size_t>(l)] = 1;
  }
  const std::vector<int> block = bc.block_of_site(lattice);
  cs.count_with_bc = count_clusters(lattice, open, block);
  return cs;
}

ClusterSet label_clusters(const Lattice& lattice, const EdgeConfig& omega) {
  return label_clusters(lattice, omega.open, omega.bc);
}

int count_clusters(const Lattice& lattice, std::span<const std::uint8_t> open,
                   std::span<const int> block_of_site) {
  const int sites = lattice.site_count();
  int blocks = 0;
  for (int b : block_of_site) blocks = std::max(blocks, b + 1);
  // One virtual root per boundary block, placed after the sites.
  DisjointSets dsu(sites + blocks);
  int components = sites + blocks;
  for (int s = 0; s < sites; ++s) {
    const int b = block_of_site[static_cast<std::size_t>(s)];
    if (b >= 0 && dsu.unite(s, sites + b)) --components;
  }
  for (int e = 0; e < lattice.edge_count(); ++e) {
    if (open[static_cast<std::size_t>(e)] && dsu.unite(lattice.edge(e).a, lattice.edge(e).b)) --components;
  }
  return components;
}

const CriticalConstants& critical() {
  static const CriticalConstants c{std::sqrt(2.0) / (1.0 + std::sqrt(2.0)), std::asinh(1.0) / 2.0, 2};
  return c;
}

double p_of_beta(double beta) {
  if (!(beta > 0.0)) throw std::domain_error("beta must be positive");
  return -std::expm1(-2.0 * beta);
}

double beta_of_p(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("p must lie in (0, 1)");
  return -0.5 * std::log1p(-p);
}

double dual_p(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("p must lie in (0, 1)");
  return 2.0 * (1.0 - p) / (2.0 - p);
}

double dual_beta(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw std::domain_error("beta must be positive and finite");
  return 0.5 * std::asinh(1.0 / std::sinh(2.0 * beta));
}

double onsager_mstar(double beta) {
  if (beta <= critical().beta_c) return 0.0;
  const double s = std::sinh(2.0 * beta);
  return std::pow(1.0 - std::pow(s, -4.0), 0.125);
}

double theta_of_p(double p) { return onsager_mstar(beta_of_p(p)); }

double exact_tension(double beta) {
  if (beta <= critical().beta_c) return 0.0;
  return 2.0 * beta + std::log(std::tanh(beta));
}

double hamiltonian(const Lattice& lattice, const SpinConfig& sigma) {
  if (sigma.side != lattice.side() || static_cast<int>(sigma.values.size()) != lattice.site_count()) {
    throw std::invalid_argument("spin configuration does not match the lattice");
  }
  if (sigma.bc != SpinBoundary::plus) throw std::invalid_argument("hamiltonian requires plus boundary conditions");
  double pair = 0.0;
  double field = 0.0;
  for (int x : lattice.interior()) {
    const int sx = sigma.values[static_cast<std::size_t>(x)];
    lattice.for_each_neighbor(x, [&](int y, int) {
      if (lattice.is_boundary(y)) {
        field += sx;
      } else {
        pair += sx * sigma.values[static_cast<std::size_t>(y)];
      }
    });
  }
  return -0.5 * pair - field;
}

double fk_log_weight(const Lattice& lattice, const EdgeConfig& omega, double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("p must lie in (0, 1)");
  if (static_cast<int>(omega.open.size()) != lattice.edge_count()) {
    throw std::invalid_argument("edge configuration does not match the lattice");
  }
  omega.bc.validate(lattice);
  const int open = omega.open_count();
  const int closed = lattice.edge_count() - open;
  const int cl = count_clusters(lattice, omega.open, omega.bc.block_of_site(lattice));
  return cl * std::log(2.0) + open * std::log(p) + closed * std::log1p(-p);
}

double fk_weight(const Lattice& lattice, const EdgeConfig& omega, double p) {
  if (lattice.edge_count() > 64) return std::exp(fk_log_weight(lattice, omega, p));
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("p must lie in (0, 1)");
  omega.bc.validate(lattice);
  const int open = omega.open_count();
  const int closed = lattice.edge_count() - open;
  const int cl = count_clusters(lattice, omega.open, omega.bc.block_of_site(lattice));
  return std::ldexp(1.0, cl) * std::pow(p, open) * std::pow(1.0 - p, closed);
}

SpinConfig couple_fk_to_spin(const Lattice& lattice, const EdgeConfig& omega, RngStream& rng) {
  const ClusterSet cs = label_clusters(lattice, omega);
  const std::vector<int> block = omega.bc.block_of_site(lattice);
  const int k = cs.cluster_count();
  int nblocks = 0;
  for (int b : block) nblocks = std::max(nblocks, b + 1);
  // Classes of clusters identified through boundary blocks.
  DisjointSets classes(k + nblocks);
  for (int s = 0; s < lattice.site_count(); ++s) {
    const int b = block[static_cast<std::size_t>(s)];
    if (b >= 0) classes.unite(cs.label[static_cast<std::size_t>(s)], k + b);
  }
  std::vector<std::int8_t> color(static_cast<std::size_t>(k + nblocks), 0);
  if (nblocks > 0) color[static_cast<std::size_t>(classes.find(k))] = 1;
  for (int c = 0; c < k; ++c) {
    auto& col = color[static_cast<std::size_t>(classes.find(c))];
    if (col == 0) col = rng.bernoulli(0.5) ? 1 : -1;
  }
  SpinConfig sigma{lattice.side(),
                   omega.bc.kind() == BoundaryCondition::Kind::free ? SpinBoundary::free : SpinBoundary::plus,
                   std::vector<std::int8_t>(static_cast<std::size_t>(lattice.site_count()))};
  for (int s = 0; s < lattice.site_count(); ++s) {
    sigma.values[static_cast<std::size_t>(s)] =
        color[static_cast<std::size_t>(classes.find(cs.label[static_cast<std::size_t>(s)]))];
  }
  return sigma;
}

EdgeConfig couple_spin_to_fk(const Lattice& lattice, const SpinConfig& sigma, double p, RngStream& rng) {
  if (!(p > 0.0 && p <= 1.0)) throw std::domain_error("p must lie in (0, 1]");
  if (static_cast<int>(sigma.values.size()) != lattice.site_count()) {
    throw std::invalid_argument("spin configuration does not match the lattice");
  }
  EdgeConfig omega = EdgeConfig::uniform(
      lattice, false, sigma.bc == SpinBoundary::plus ? BoundaryCondition::wired() : BoundaryCondition::free());
  for (int e = 0; e < lattice.edge_count(); ++e) {
    const Edge& ed = lattice.edge(e);
    auto spin = [&](int s) {
      return sigma.bc == SpinBoundary::plus && lattice.is_boundary(s) ? std::int8_t{1}
                                                                        : sigma.values[static_cast<std::size_t>(s)];
    };
    if (spin(ed.a) == spin(ed.b)) omega.open[static_cast<std::size_t>(e)] = rng.bernoulli(p) ? 1 : 0;
  }
  return omega;
}

}  // namespace wulff
