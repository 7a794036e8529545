#include "wulff/enumerate.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <queue>
#include <stdexcept>

#include "wulff/dsu.hpp"
#include "wulff/errors.hpp"

namespace wulff {
namespace {

// Normalizes log-weights in place into probabilities.
void normalize_logs(std::vector<double>& w) {
  const double mx = *std::max_element(w.begin(), w.end());
  double z = 0.0;
  for (double& x : w) {
    x = std::exp(x - mx);
    z += x;
  }
  for (double& x : w) x /= z;
}

std::vector<int> free_sites_of(const Lattice& lattice, SpinBoundary bc) {
  if (bc == SpinBoundary::plus) return {lattice.interior().begin(), lattice.interior().end()};
  std::vector<int> all(static_cast<std::size_t>(lattice.site_count()));
  for (int i = 0; i < lattice.site_count(); ++i) all[static_cast<std::size_t>(i)] = i;
  return all;
}

// Energy whose Boltzmann factor is exp(-beta E): the plus-bc Hamiltonian, or
// minus the sum over all edges for free boundary conditions.
double energy(const Lattice& lattice, const SpinConfig& sigma) {
  if (sigma.bc == SpinBoundary::plus) return hamiltonian(lattice, sigma);
  double e = 0.0;
  for (const Edge& ed : lattice.edges()) {
    e -= sigma.values[static_cast<std::size_t>(ed.a)] * sigma.values[static_cast<std::size_t>(ed.b)];
  }
  return e;
}

}  // namespace

SpinConfig IsingTable::config(std::uint64_t mask) const {
  SpinConfig s = SpinConfig::uniform(Lattice(side), 1, bc);
  for (std::size_t i = 0; i < free_sites.size(); ++i) {
    s.values[static_cast<std::size_t>(free_sites[i])] = (mask >> i) & 1 ? 1 : -1;
  }
  return s;
}

std::uint64_t IsingTable::mask_of(const SpinConfig& sigma) const {
  std::uint64_t m = 0;
  for (std::size_t i = 0; i < free_sites.size(); ++i) {
    if (sigma.values[static_cast<std::size_t>(free_sites[i])] > 0) m |= std::uint64_t{1} << i;
  }
  return m;
}

IsingTable enumerate_ising(const Lattice& lattice, double beta, SpinBoundary bc) {
  IsingTable t{lattice.side(), bc, beta, free_sites_of(lattice, bc), {}};
  if (static_cast<int>(t.free_sites.size()) > kMaxEnumeratedSpins) {
    throw OracleSizeError("too many free spins for exact enumeration");
  }
  const std::uint64_t states = std::uint64_t{1} << t.free_sites.size();
  t.prob.resize(states);
  SpinConfig s = SpinConfig::uniform(lattice, 1, bc);
  for (std::uint64_t m = 0; m < states; ++m) {
    for (std::size_t i = 0; i < t.free_sites.size(); ++i) {
      s.values[static_cast<std::size_t>(t.free_sites[i])] = (m >> i) & 1 ? 1 : -1;
    }
    t.prob[m] = -beta * energy(lattice, s);
  }
  normalize_logs(t.prob);
  return t;
}

double ising_prob(const Lattice& lattice, const SpinConfig& sigma, double beta) {
  if (sigma.side != lattice.side()) throw std::invalid_argument("spin configuration does not match the lattice");
  if (sigma.bc == SpinBoundary::plus) {
    for (int b : lattice.boundary()) {
      if (sigma.values[static_cast<std::size_t>(b)] != 1) return 0.0;
    }
  }
  const IsingTable t = enumerate_ising(lattice, beta, sigma.bc);
  return t.prob[t.mask_of(sigma)];
}

EdgeConfig FkTable::config(std::uint64_t mask) const {
  const Lattice lattice(side);
  EdgeConfig e = EdgeConfig::uniform(lattice, false, bc);
  for (int i = 0; i < lattice.edge_count(); ++i) e.open[static_cast<std::size_t>(i)] = (mask >> i) & 1;
  return e;
}

void for_each_fk_config(const Lattice& lattice, const BoundaryCondition& bc,
                        const std::function<void(std::uint64_t, int, int)>& visit) {
  const int edges = lattice.edge_count();
  if (edges > kMaxEnumeratedEdges) throw OracleSizeError("too many edges for exact enumeration");
  bc.validate(lattice);
  const std::vector<int> block = bc.block_of_site(lattice);
  const int sites = lattice.site_count();
  int blocks = 0;
  for (int b : block) blocks = std::max(blocks, b + 1);
  DisjointSets base(sites + blocks);
  int base_components = sites + blocks;
  for (int s = 0; s < sites; ++s) {
    if (block[static_cast<std::size_t>(s)] >= 0 && base.unite(s, sites + block[static_cast<std::size_t>(s)])) {
      --base_components;
    }
  }
  const std::uint64_t states = std::uint64_t{1} << edges;
  for (std::uint64_t m = 0; m < states; ++m) {
    DisjointSets dsu = base;
    int comps = base_components;
    for (std::uint64_t bits = m; bits; bits &= bits - 1) {
      const Edge& ed = lattice.edge(std::countr_zero(bits));
      if (dsu.unite(ed.a, ed.b)) --comps;
    }
    visit(m, std::popcount(m), comps);
  }
}

FkTable enumerate_fk(const Lattice& lattice, double p, const BoundaryCondition& bc) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("p must lie in (0, 1)");
  FkTable t{lattice.side(), p, bc, {}};
  const int edges = lattice.edge_count();
  if (edges > kMaxEnumeratedEdges) throw OracleSizeError("too many edges for exact enumeration");
  t.prob.resize(std::size_t{1} << edges);
  const double lp = std::log(p), lq = std::log1p(-p), l2 = std::log(2.0);
  for_each_fk_config(lattice, bc, [&](std::uint64_t m, int open, int cl) {
    t.prob[m] = cl * l2 + open * lp + (edges - open) * lq;
  });
  normalize_logs(t.prob);
  return t;
}

SmallGraph graph_of(const Lattice& lattice, const BoundaryCondition& bc) {
  if (bc.kind() == BoundaryCondition::Kind::partition) {
    throw std::invalid_argument("graph_of supports wired and free boundary conditions");
  }
  SmallGraph g;
  g.vertices = lattice.site_count();
  for (const Edge& e : lattice.edges()) g.edges.emplace_back(e.a, e.b);
  if (bc.kind() == BoundaryCondition::Kind::wired) {
    g.wired.assign(static_cast<std::size_t>(g.vertices), 0);
    for (int b : lattice.boundary()) g.wired[static_cast<std::size_t>(b)] = 1;
  }
  return g;
}

int DualBox::vertex(HalfPoint p) const {
  const int x = (p.x2 + 1) / 2;  // x + 1/2 -> x + 1 in [0, n]
  const int y = (p.y2 + 1) / 2;
  if (!(p.x2 & 1) || !(p.y2 & 1) || x < 0 || y < 0 || x > side || y > side) return -1;
  return y * (side + 1) + x;
}

HalfPoint DualBox::point(int v) const {
  const int x = v % (side + 1);
  const int y = v / (side + 1);
  return {2 * x - 1, 2 * y - 1};
}

DualBox dual_box(const Lattice& lattice) {
  DualBox d;
  d.side = lattice.side();
  d.graph.vertices = (d.side + 1) * (d.side + 1);
  for (const Edge& e : lattice.edges()) {
    const DualEdge de = dual_edge(make_primal_edge(lattice.site(e.a), lattice.site(e.b)));
    d.graph.edges.emplace_back(d.vertex(de.a), d.vertex(de.b));
  }
  return d;
}

int graph_cluster_count(const SmallGraph& g, std::uint64_t open_mask) {
  const bool wired = !g.wired.empty();
  DisjointSets dsu(g.vertices + 1);
  int comps = g.vertices + 1;
  if (wired) {
    for (int v = 0; v < g.vertices; ++v) {
      if (g.wired[static_cast<std::size_t>(v)] && dsu.unite(v, g.vertices)) --comps;
    }
  }
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    if ((open_mask >> e) & 1) {
      if (dsu.unite(g.edges[e].first, g.edges[e].second)) --comps;
    }
  }
  // The auxiliary root counts only when something is wired to it.
  return wired ? comps : comps - 1;
}

std::vector<double> enumerate_graph_fk(const SmallGraph& g, double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("p must lie in (0, 1)");
  const int edges = static_cast<int>(g.edges.size());
  if (edges > kMaxEnumeratedEdges) throw OracleSizeError("too many edges for exact enumeration");
  std::vector<double> w(std::size_t{1} << edges);
  const double lp = std::log(p), lq = std::log1p(-p), l2 = std::log(2.0);
  for (std::uint64_t m = 0; m < w.size(); ++m) {
    const int open = std::popcount(m);
    w[m] = graph_cluster_count(g, m) * l2 + open * lp + (edges - open) * lq;
  }
  normalize_logs(w);
  return w;
}

bool graph_connects(const SmallGraph& g, std::uint64_t open_mask, std::span<const int> sources,
                    std::span<const int> targets) {
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(g.vertices));
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    if ((open_mask >> e) & 1) {
      adj[static_cast<std::size_t>(g.edges[e].first)].push_back(g.edges[e].second);
      adj[static_cast<std::size_t>(g.edges[e].second)].push_back(g.edges[e].first);
    }
  }
  std::vector<std::uint8_t> seen(static_cast<std::size_t>(g.vertices), 0), target(seen);
  for (int t : targets) target[static_cast<std::size_t>(t)] = 1;
  std::queue<int> q;
  for (int s : sources) {
    if (!seen[static_cast<std::size_t>(s)]) {
      seen[static_cast<std::size_t>(s)] = 1;
      q.push(s);
    }
  }
  while (!q.empty()) {
    const int v = q.front();
    q.pop();
    if (target[static_cast<std::size_t>(v)]) return true;
    for (int u : adj[static_cast<std::size_t>(v)]) {
      if (!seen[static_cast<std::size_t>(u)]) {
        seen[static_cast<std::size_t>(u)] = 1;
        q.push(u);
      }
    }
  }
  return false;
}

bool primal_left_right_crossing(const Lattice& lattice, std::uint64_t open_mask) {
  const SmallGraph g = graph_of(lattice, BoundaryCondition::free());
  std::vector<int> left, right;
  for (int y = 0; y < lattice.side(); ++y) {
    left.push_back(lattice.index({0, y}));
    right.push_back(lattice.index({lattice.side() - 1, y}));
  }
  return graph_connects(g, open_mask, left, right);
}

bool dual_top_bottom_crossing(const DualBox& dual, std::uint64_t dual_open_mask) {
  std::vector<int> top, bottom;
  for (int x = 0; x <= dual.side; ++x) {
    top.push_back(dual.side * (dual.side + 1) + x);
    bottom.push_back(x);
  }
  return graph_connects(dual.graph, dual_open_mask, top, bottom);
}

DualityResult duality_check(const Lattice& lattice, double p) {
  DualityResult r{p, dual_p(p), 0.0, 0.0};
  const FkTable primal = enumerate_fk(lattice, p, BoundaryCondition::wired());
  for (std::uint64_t m = 0; m < primal.prob.size(); ++m) {
    if (primal_left_right_crossing(lattice, m)) r.primal_wired += primal.prob[m];
  }
  const DualBox dual = dual_box(lattice);
  const std::vector<double> dprob = enumerate_graph_fk(dual.graph, r.p_dual);
  for (std::uint64_t m = 0; m < dprob.size(); ++m) {
    if (!dual_top_bottom_crossing(dual, m)) r.dual_free += dprob[m];
  }
  return r;
}

CouplingResult validate_coupling(const Lattice& lattice, double beta, SpinBoundary bc) {
  const double p = p_of_beta(beta);
  const int edges = lattice.edge_count();
  if (edges > kMaxEnumeratedEdges) throw OracleSizeError("too many edges for exact enumeration");
  const std::vector<int> free_sites = free_sites_of(lattice, bc);
  if (static_cast<int>(free_sites.size()) + edges > 32) {
    throw OracleSizeError("joint state space too large for exhaustive construction");
  }
  const std::uint64_t spin_states = std::uint64_t{1} << free_sites.size();
  const std::uint64_t edge_states = std::uint64_t{1} << edges;

  std::vector<double> edge_factor(static_cast<std::size_t>(edges) + 1);
  for (int k = 0; k <= edges; ++k) edge_factor[static_cast<std::size_t>(k)] = std::pow(p, k) * std::pow(1 - p, edges - k);

  std::vector<double> spin_marg(spin_states, 0.0), edge_marg(edge_states, 0.0);
  double z = 0.0;
  std::vector<std::int8_t> s(static_cast<std::size_t>(lattice.site_count()), 1);
  for (std::uint64_t sm = 0; sm < spin_states; ++sm) {
    for (std::size_t i = 0; i < free_sites.size(); ++i) s[static_cast<std::size_t>(free_sites[i])] = (sm >> i) & 1 ? 1 : -1;
    std::uint64_t agree = 0;
    for (int e = 0; e < edges; ++e) {
      const Edge& ed = lattice.edge(e);
      if (s[static_cast<std::size_t>(ed.a)] == s[static_cast<std::size_t>(ed.b)]) agree |= std::uint64_t{1} << e;
    }
    for (std::uint64_t om = 0; om < edge_states; ++om) {
      if (om & ~agree) continue;  // (sigma_x - sigma_y) omega(e) must vanish
      const double w = edge_factor[static_cast<std::size_t>(std::popcount(om))];
      spin_marg[sm] += w;
      edge_marg[om] += w;
      z += w;
    }
  }
  CouplingResult r;
  r.joint_states = spin_states * edge_states;
  const IsingTable ising = enumerate_ising(lattice, beta, bc);
  for (std::uint64_t sm = 0; sm < spin_states; ++sm) r.spin_tv += std::abs(spin_marg[sm] / z - ising.prob[sm]);
  const FkTable fk = enumerate_fk(lattice, p,
                                  bc == SpinBoundary::plus ? BoundaryCondition::wired() : BoundaryCondition::free());
  for (std::uint64_t om = 0; om < edge_states; ++om) r.edge_tv += std::abs(edge_marg[om] / z - fk.prob[om]);
  r.spin_tv *= 0.5;
  r.edge_tv *= 0.5;
  return r;
}

}  // namespace wulff
