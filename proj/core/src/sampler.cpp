#include "wulff/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "wulff/errors.hpp"

namespace wulff {

ClusterSampler::ClusterSampler(int n, double p, BoundaryCondition bc, RngStream rng, double field)
    : lattice_(n), p_(p), bc_(std::move(bc)), rng_(rng), field_(field) {
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("p must lie in [0, 1]");
  bc_.validate(lattice_);
  always_open_ = p >= 1.0;
  open_threshold_ = always_open_ ? 0 : static_cast<std::uint64_t>(std::ldexp(p, 64));
  block_ = bc_.block_of_site(lattice_);
  blocks_ = bc_.block_count(lattice_);
  const auto sites = static_cast<std::size_t>(lattice_.site_count());
  spins_.assign(sites, 1);
  bonds_.assign(static_cast<std::size_t>(lattice_.edge_count()), 0);
  parent_.resize(sites + static_cast<std::size_t>(blocks_));
  size_.resize(parent_.size());
  color_.resize(parent_.size());
  magnetization_ = static_cast<long long>(sites);
}

ClusterSampler ClusterSampler::ising(int n, double beta, SpinBoundary bc, RngStream rng, double field) {
  if (!(beta >= 0.0)) throw ConfigError("beta must be nonnegative");
  const double p = beta == 0.0 ? 0.0 : p_of_beta(beta);
  return ClusterSampler(n, p, bc == SpinBoundary::plus ? BoundaryCondition::wired() : BoundaryCondition::free(), rng,
                        field);
}

int ClusterSampler::dsu_find(int x) {
  while (parent_[static_cast<std::size_t>(x)] != x) {
    auto& px = parent_[static_cast<std::size_t>(x)];
    px = parent_[static_cast<std::size_t>(px)];
    x = px;
  }
  return x;
}

void ClusterSampler::dsu_unite(int a, int b) {
  a = dsu_find(a);
  b = dsu_find(b);
  if (a == b) return;
  if (size_[static_cast<std::size_t>(a)] < size_[static_cast<std::size_t>(b)]) std::swap(a, b);
  parent_[static_cast<std::size_t>(b)] = a;
  size_[static_cast<std::size_t>(a)] += size_[static_cast<std::size_t>(b)];
}

void ClusterSampler::sweep() {
  const int sites = lattice_.site_count();
  const int total = sites + blocks_;
  for (int i = 0; i < total; ++i) {
    parent_[static_cast<std::size_t>(i)] = i;
    size_[static_cast<std::size_t>(i)] = i < sites ? 1 : 0;
    color_[static_cast<std::size_t>(i)] = 0;
  }
  for (int s = 0; s < sites; ++s) {
    if (const int b = block_[static_cast<std::size_t>(s)]; b >= 0) dsu_unite(s, sites + b);
  }
  const auto edges = lattice_.edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    std::uint8_t open = 0;
    if (spins_[static_cast<std::size_t>(edges[e].a)] == spins_[static_cast<std::size_t>(edges[e].b)]) {
      open = always_open_ || rng_() < open_threshold_;
    }
    bonds_[e] = open;
    if (open) dsu_unite(edges[e].a, edges[e].b);
  }
  if (blocks_ > 0) color_[static_cast<std::size_t>(dsu_find(sites))] = 1;
  long long m = 0;
  for (int s = 0; s < sites; ++s) {
    const int r = dsu_find(s);
    auto& c = color_[static_cast<std::size_t>(r)];
    if (c == 0) {
      const double prob_plus =
          field_ == 0.0 ? 0.5 : 1.0 / (1.0 + std::exp(-2.0 * field_ * size_[static_cast<std::size_t>(r)]));
      c = rng_.uniform() < prob_plus ? 1 : -1;
    }
    spins_[static_cast<std::size_t>(s)] = c;
    m += c;
  }
  magnetization_ = m;
}

void ClusterSampler::set_spins(std::span<const std::int8_t> spins) {
  if (spins.size() != spins_.size()) throw std::invalid_argument("spin state size mismatch");
  long long m = 0;
  for (std::size_t i = 0; i < spins.size(); ++i) {
    spins_[i] = spins[i];
    m += spins[i];
  }
  magnetization_ = m;
}

SpinConfig ClusterSampler::spin_config() const {
  return {lattice_.side(), blocks_ > 0 ? SpinBoundary::plus : SpinBoundary::free, spins_};
}

EdgeConfig ClusterSampler::edge_config() const { return {lattice_.side(), bc_, bonds_}; }

EdgeConfig sample_fk(int n, double p, const BoundaryCondition& bc, int sweeps, RngStream rng) {
  if (sweeps < 1) throw ConfigError("sweeps must be at least 1");
  if (!(p > 0.0 && p < 1.0)) throw ConfigError("p must lie in (0, 1)");
  ClusterSampler chain(n, p, bc, rng);
  chain.run(sweeps);
  return chain.edge_config();
}

Estimate batch_means(std::span<const double> values, int batches) {
  Estimate est;
  if (values.empty()) return est;
  double sum = 0.0;
  for (double v : values) sum += v;
  est.mean = sum / static_cast<double>(values.size());
  const std::size_t per = values.size() / static_cast<std::size_t>(std::max(batches, 2));
  if (per == 0) return est;
  const std::size_t nb = values.size() / per;
  std::vector<double> means(nb, 0.0);
  for (std::size_t b = 0; b < nb; ++b) {
    for (std::size_t i = 0; i < per; ++i) means[b] += values[b * per + i];
    means[b] /= static_cast<double>(per);
  }
  double mm = 0.0;
  for (double v : means) mm += v;
  mm /= static_cast<double>(nb);
  double var = 0.0;
  for (double v : means) var += (v - mm) * (v - mm);
  var /= static_cast<double>(nb - 1);
  est.std_error = std::sqrt(var / static_cast<double>(nb));
  return est;
}

std::vector<Estimate> two_point_profile(const TwoPointParams& params, RngStream rng) {
  if (params.beta_hat >= critical().beta_c) {
    throw ConfigError("two-point estimator requires a subcritical coupling");
  }
  if (params.k_min < 0 || params.k_max < params.k_min) throw ConfigError("invalid distance range");
  const Site d = params.direction;
  const int reach_x = std::abs(d.x) * params.k_max;
  const int reach_y = std::abs(d.y) * params.k_max;
  // Reference sites sit in the middle so every pair keeps a margin to the boundary.
  const int n = params.n;
  const int x_lo = (n - reach_x) / 4, x_hi = n - 1 - reach_x - (n - reach_x) / 4;
  const int y_lo = (n - reach_y) / 4, y_hi = n - 1 - reach_y - (n - reach_y) / 4;
  if (x_hi < x_lo || y_hi < y_lo) throw ConfigError("box too small for the requested distances");

  ClusterSampler chain = ClusterSampler::ising(n, params.beta_hat, SpinBoundary::free, rng);
  chain.run(params.thermalize);
  const Lattice& lat = chain.lattice();
  const int ks = params.k_max - params.k_min + 1;
  std::vector<std::vector<double>> series(static_cast<std::size_t>(ks));
  std::vector<double> acc(static_cast<std::size_t>(ks));
  const int stride = std::max(1, params.stride);
  for (int s = 0; s < params.samples; ++s) {
    chain.sweep();
    std::fill(acc.begin(), acc.end(), 0.0);
    long refs = 0;
    for (int y = y_lo; y <= y_hi; y += stride) {
      for (int x = x_lo; x <= x_hi; x += stride) {
        const Site z{x, y};
        const int r0 = chain.root(lat.index(z));
        for (int k = params.k_min; k <= params.k_max; ++k) {
          const Site t{z.x + k * d.x, z.y + k * d.y};
          if (chain.root(lat.index(t)) == r0) acc[static_cast<std::size_t>(k - params.k_min)] += 1.0;
        }
        ++refs;
      }
    }
    for (int k = 0; k < ks; ++k) series[static_cast<std::size_t>(k)].push_back(acc[static_cast<std::size_t>(k)] / refs);
  }
  std::vector<Estimate> out;
  out.reserve(static_cast<std::size_t>(ks));
  for (const auto& v : series) out.push_back(batch_means(v));
  return out;
}

Estimate two_point_estimate(int n, double beta_hat, Site x, int samples, RngStream rng) {
  if (x == Site{0, 0}) {
    if (beta_hat >= critical().beta_c) throw ConfigError("two-point estimator requires a subcritical coupling");
    return {1.0, 0.0};
  }
  const int g = std::gcd(std::abs(x.x), std::abs(x.y));
  TwoPointParams params;
  params.n = n;
  params.beta_hat = beta_hat;
  params.direction = {x.x / g, x.y / g};
  params.k_min = g;
  params.k_max = g;
  params.samples = samples;
  return two_point_profile(params, rng).front();
}

}  // namespace wulff
