#include "wulff/rare.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>

#include "wulff/dsu.hpp"
#include "wulff/errors.hpp"
#include "wulff/ladder.hpp"

namespace wulff {

CutBiasedChain::CutBiasedChain(int n, double p, BoundaryCondition bc, CutStatistic cut, std::vector<int> local_edges,
                               std::vector<int> cut_edges, RngStream rng)
    : lattice_(n), p_(p), bc_(std::move(bc)), cut_(std::move(cut)), local_edges_(std::move(local_edges)), rng_(rng) {
  if (!(p > 0.0 && p < 1.0)) throw ConfigError("edge probability must lie in (0, 1)");
  if (!cut_) throw ConfigError("cut statistic is empty");
  bc_.validate(lattice_);
  block_ = bc_.block_of_site(lattice_);
  blocks_ = bc_.block_count(lattice_);
  block_sites_.resize(static_cast<std::size_t>(blocks_));
  for (int s = 0; s < lattice_.site_count(); ++s) {
    if (block_[static_cast<std::size_t>(s)] >= 0) block_sites_[static_cast<std::size_t>(block_[static_cast<std::size_t>(s)])].push_back(s);
  }
  const int edges = lattice_.edge_count();
  if (local_edges_.empty()) {
    local_edges_.resize(static_cast<std::size_t>(edges));
    std::iota(local_edges_.begin(), local_edges_.end(), 0);
  }
  affects_cut_.assign(static_cast<std::size_t>(edges), cut_edges.empty() ? 1 : 0);
  for (int e : cut_edges) {
    if (e < 0 || e >= edges) throw ConfigError("cut edge out of range");
    affects_cut_[static_cast<std::size_t>(e)] = 1;
  }
  for (int e : local_edges_) {
    if (e < 0 || e >= edges) throw ConfigError("local edge out of range");
  }
  mark_.assign(static_cast<std::size_t>(lattice_.site_count() + blocks_), 0);
  open_.assign(static_cast<std::size_t>(edges), 1);
  cut_value_ = std::min(cut_(open_), edges + 1);
}

double CutBiasedChain::acceptance() const {
  return proposals_ > 0 ? static_cast<double>(accepted_) / static_cast<double>(proposals_) : 0.0;
}

// Two breadth-first searches from the endpoints, advanced alternately, so the cost
// is that of the smaller side. Boundary blocks act as extra nodes.
bool CutBiasedChain::connected_without(int edge) {
  if (generation_ > std::numeric_limits<std::uint32_t>::max() - 4) {
    std::fill(mark_.begin(), mark_.end(), 0);
    generation_ = 0;
  }
  const std::uint32_t side_a = ++generation_, side_b = ++generation_;
  const int sites = lattice_.site_count();
  const auto& e = lattice_.edge(edge);
  std::vector<int> queue_a{e.a}, queue_b{e.b};
  std::size_t head_a = 0, head_b = 0;
  mark_[static_cast<std::size_t>(e.a)] = side_a;
  mark_[static_cast<std::size_t>(e.b)] = side_b;
  if (block_[static_cast<std::size_t>(e.a)] >= 0 && block_[static_cast<std::size_t>(e.a)] == block_[static_cast<std::size_t>(e.b)]) {
    return true;
  }
  auto expand = [&](std::vector<int>& queue, std::size_t& head, std::uint32_t own, std::uint32_t other) {
    const int v = queue[head++];
    auto reach = [&](int u) {
      auto& m = mark_[static_cast<std::size_t>(u)];
      if (m == other) return true;
      if (m != own) {
        m = own;
        queue.push_back(u);
      }
      return false;
    };
    if (v >= sites) {
      const int b = v - sites;
      for (int s : block_sites_[static_cast<std::size_t>(b)]) {
        if (reach(s)) return true;
      }
      return false;
    }
    for (int f : {lattice_.right_edge(v), lattice_.up_edge(v), lattice_.left_edge(v), lattice_.down_edge(v)}) {
      if (f < 0 || f == edge || !open_[static_cast<std::size_t>(f)]) continue;
      const auto& g = lattice_.edge(f);
      if (reach(g.a == v ? g.b : g.a)) return true;
    }
    const int b = block_[static_cast<std::size_t>(v)];
    return b >= 0 && reach(sites + b);
  };
  while (head_a < queue_a.size() && head_b < queue_b.size()) {
    if (expand(queue_a, head_a, side_a, side_b)) return true;
    if (head_a >= queue_a.size()) return false;
    if (expand(queue_b, head_b, side_b, side_a)) return true;
  }
  return false;
}

void CutBiasedChain::sweep(double bias) {
  const int cap = lattice_.edge_count() + 1;
  const double q_open_isolated = p_ / (p_ + 2.0 * (1.0 - p_));
  bool stale = false;
  for (int e : local_edges_) {
    const auto i = static_cast<std::size_t>(e);
    const bool proposed = rng_.bernoulli(connected_without(e) ? p_ : q_open_isolated);
    if (proposed == (open_[i] != 0)) continue;
    open_[i] = proposed ? 1 : 0;
    if (!affects_cut_[i]) continue;
    if (bias == 0.0) {  // no test needed; the statistic is refreshed after the sweep
      stale = true;
      continue;
    }
    const int next = std::min(cut_(open_), cap);
    if (next <= cut_value_ || rng_.uniform() < std::exp(-bias * (next - cut_value_))) {
      cut_value_ = next;
    } else {
      open_[i] ^= 1;
    }
  }
  if (stale) cut_value_ = std::min(cut_(open_), cap);
  recolour_proposal(bias);
}

void CutBiasedChain::recolour_proposal(double bias) {
  const int sites = lattice_.site_count();
  DisjointSets dsu(sites + blocks_);
  for (int e = 0; e < lattice_.edge_count(); ++e) {
    if (open_[static_cast<std::size_t>(e)]) dsu.unite(lattice_.edge(e).a, lattice_.edge(e).b);
  }
  for (int s = 0; s < sites; ++s) {
    if (block_[static_cast<std::size_t>(s)] >= 0) dsu.unite(s, sites + block_[static_cast<std::size_t>(s)]);
  }
  std::vector<std::int8_t> colour(static_cast<std::size_t>(sites + blocks_), 0);
  std::vector<std::int8_t> spin(static_cast<std::size_t>(sites));
  for (int s = 0; s < sites; ++s) {
    auto& c = colour[static_cast<std::size_t>(dsu.find(s))];
    if (c == 0) c = rng_.bernoulli(0.5) ? 1 : -1;
    spin[static_cast<std::size_t>(s)] = c;
  }
  std::vector<std::uint8_t> proposal(open_.size(), 0);
  for (int e = 0; e < lattice_.edge_count(); ++e) {
    const auto& edge = lattice_.edge(e);
    if (spin[static_cast<std::size_t>(edge.a)] == spin[static_cast<std::size_t>(edge.b)]) {
      proposal[static_cast<std::size_t>(e)] = rng_.bernoulli(p_) ? 1 : 0;
    }
  }
  const int next = std::min(cut_(proposal), lattice_.edge_count() + 1);
  ++proposals_;
  if (next <= cut_value_ || rng_.uniform() < std::exp(-bias * (next - cut_value_))) {
    open_ = std::move(proposal);
    cut_value_ = next;
    ++accepted_;
  }
}

CutStatistic box_crossing_statistic(const Lattice& lattice, const Box& box) {
  auto graphs = std::make_shared<std::array<CutGraph, 2>>(crossing_cut_graphs(lattice, box));
  return [graphs](std::span<const std::uint8_t> open) {
    const int left_right = (*graphs)[0].shortest(open);
    return (*graphs)[1].shortest(open, left_right);
  };
}

CutStatistic cut_graph_statistic(CutGraph graph) {
  auto shared = std::make_shared<CutGraph>(std::move(graph));
  return [shared](std::span<const std::uint8_t> open) { return shared->shortest(open); };
}

std::vector<double> linear_biases(int windows, double max_bias) {
  if (windows < 1) throw ConfigError("need at least one window");
  if (!(max_bias >= 0.0)) throw ConfigError("biases must be non-negative");
  std::vector<double> out(static_cast<std::size_t>(windows), 0.0);
  for (int k = 1; k < windows; ++k) out[static_cast<std::size_t>(k)] = max_bias * k / (windows - 1);
  return out;
}

CutLadderResult cut_zero_log_probability(const CutLadderParams& params, const CutStatistic& cut, RngStream rng) {
  if (params.biases.empty()) throw ConfigError("need at least one bias window");
  if (params.sweeps < 1 || params.thermalize < 0 || params.replicas < 1) {
    throw ConfigError("sweeps and replicas must be positive");
  }
  CutLadderResult out;
  out.min_overlap = 1.0;
  double acceptance = 0.0;
  for (int r = 0; r < params.replicas; ++r) {
    CutBiasedChain chain(params.n, params.p, params.bc, cut, params.local_edges, params.cut_edges,
                         rng.split(static_cast<std::uint64_t>(r)));
    std::vector<LadderWindow> windows;
    long long hits = 0;
    long long top_hits = 0;
    auto run_window = [&](double bias) {
      for (int t = 0; t < params.thermalize; ++t) chain.sweep(bias);
      LadderWindow window;
      window.lambda = -bias;
      top_hits = 0;
      for (int t = 0; t < params.sweeps; ++t) {
        chain.sweep(bias);
        window.add(chain.cut(), chain.cut() == 0);
        top_hits += chain.cut() == 0 ? 1 : 0;
      }
      hits += top_hits;
      windows.push_back(std::move(window));
    };
    for (double bias : params.biases) run_window(bias);
    // The steepest window must sit on the event often enough to anchor the
    // reweighting; otherwise keep climbing at the same spacing.
    const std::size_t planned = params.biases.size();
    const double step = planned > 1 ? params.biases[planned - 1] - params.biases[planned - 2] : 1.0;
    double bias = params.biases.back();
    for (int extra = 0; extra < params.max_extra_windows &&
                        static_cast<double>(top_hits) < params.min_top_hits * params.sweeps;
         ++extra) {
      bias += step;
      run_window(bias);
    }
    if (hits == 0) throw StarvationError("no biased window reached the event", 0.0);
    out.replicas.push_back(ladder_log_probability(windows, 0.0).log_probability);
    out.min_overlap = std::min(out.min_overlap, ladder_min_overlap(windows));
    out.windows = std::max(out.windows, static_cast<int>(windows.size()));
    acceptance += chain.acceptance();
  }
  const double count = static_cast<double>(out.replicas.size());
  out.log_probability = std::accumulate(out.replicas.begin(), out.replicas.end(), 0.0) / count;
  if (out.replicas.size() > 1) {
    double sq = 0.0;
    for (double v : out.replicas) sq += (v - out.log_probability) * (v - out.log_probability);
    out.std_error = std::sqrt(sq / (count - 1.0) / count);
  }
  out.acceptance = acceptance / count;
  return out;
}

}  // namespace wulff
