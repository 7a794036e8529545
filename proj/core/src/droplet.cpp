#include "wulff/droplet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "wulff/errors.hpp"
#include "wulff/ladder.hpp"
#include "wulff/parallel.hpp"
#include "wulff/sampler.hpp"

namespace wulff {

std::vector<std::int8_t> majority_smooth(const SpinConfig& sigma) {
  const int n = sigma.side;
  std::vector<std::int8_t> out(sigma.values.size());
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) {
      int sum = 0;
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          const int xx = x + dx, yy = y + dy;
          if (xx >= 0 && yy >= 0 && xx < n && yy < n) sum += sigma.values[static_cast<std::size_t>(yy) * n + xx];
        }
      }
      const auto own = sigma.values[static_cast<std::size_t>(y) * n + x];
      out[static_cast<std::size_t>(y) * n + x] = sum > 0 ? 1 : sum < 0 ? -1 : own;
    }
  }
  return out;
}

DropletShape droplet_extract(const SpinConfig& sigma) {
  const int n = sigma.side;
  const auto smooth = majority_smooth(sigma);
  // Largest 4-connected minus component; ties go to the one found first.
  std::vector<int> component(smooth.size(), -1);
  std::vector<int> best;
  std::vector<int> stack;
  int next_id = 0;
  for (int start = 0; start < n * n; ++start) {
    if (smooth[static_cast<std::size_t>(start)] >= 0 || component[static_cast<std::size_t>(start)] >= 0) continue;
    std::vector<int> members;
    stack.push_back(start);
    component[static_cast<std::size_t>(start)] = next_id;
    while (!stack.empty()) {
      const int s = stack.back();
      stack.pop_back();
      members.push_back(s);
      const int x = s % n, y = s / n;
      const int nbrs[4][2] = {{x - 1, y}, {x + 1, y}, {x, y - 1}, {x, y + 1}};
      for (const auto& nb : nbrs) {
        if (nb[0] < 0 || nb[1] < 0 || nb[0] >= n || nb[1] >= n) continue;
        const int t = nb[1] * n + nb[0];
        if (smooth[static_cast<std::size_t>(t)] < 0 && component[static_cast<std::size_t>(t)] < 0) {
          component[static_cast<std::size_t>(t)] = next_id;
          stack.push_back(t);
        }
      }
    }
    ++next_id;
    if (members.size() > best.size()) best = std::move(members);
  }
  DropletShape shape;
  shape.region = DiscreteRegion(n);
  if (best.empty()) return shape;
  double su = 0.0, sv = 0.0;
  for (int s : best) {
    shape.region.set(s % n, s / n, true);
    const Point2 p = site_point(n, {s % n, s / n});
    su += p.u;
    sv += p.v;
  }
  shape.area = shape.region.area();
  shape.perimeter_raw = perimeter(shape.region, PerimeterMethod::raw);
  shape.perimeter_poly = perimeter(shape.region, PerimeterMethod::polygon);
  shape.center = {su / static_cast<double>(best.size()), sv / static_cast<double>(best.size())};
  if (shape.perimeter_poly > 0.0) {
    shape.circularity = 4.0 * std::numbers::pi * shape.area / (shape.perimeter_poly * shape.perimeter_poly);
  }
  return shape;
}

long long deficit_threshold(int n, double beta, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("delta must lie in (0, 1)");
  if (!(beta > critical().beta_c)) throw ConfigError("conditioning needs beta above beta_c");
  return static_cast<long long>(std::floor((1.0 - delta) * onsager_mstar(beta) * n * n));
}

namespace {

// Plus configuration with a centred minus disc just large enough that the
// magnetization sum meets the threshold; the boundary stays plus.
std::vector<std::int8_t> droplet_seed(int n, long long threshold) {
  std::vector<std::int8_t> spins(static_cast<std::size_t>(n) * n, 1);
  const double c = (n - 1) / 2.0;
  long long m = static_cast<long long>(n) * n;
  // Flip sites in order of distance from the centre until the constraint holds.
  std::vector<int> order(spins.size());
  std::iota(order.begin(), order.end(), 0);
  auto dist2 = [&](int s) {
    const double dx = s % n - c, dy = s / n - c;
    return dx * dx + dy * dy;
  };
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return dist2(a) < dist2(b); });
  for (int s : order) {
    if (m <= threshold) break;
    const int x = s % n, y = s / n;
    if (x == 0 || y == 0 || x == n - 1 || y == n - 1) continue;
    spins[static_cast<std::size_t>(s)] = -1;
    m -= 2;
  }
  if (m > threshold) throw ConfigError("constraint cannot be met with a plus boundary");
  return spins;
}

// One constrained move: a sweep whose result is dropped if it leaves the set.
bool constrained_sweep(ClusterSampler& chain, long long wall, std::vector<std::int8_t>& scratch) {
  const auto current = chain.spins();
  scratch.assign(current.begin(), current.end());
  chain.sweep();
  if (chain.magnetization() <= wall) return true;
  chain.set_spins(scratch);
  return false;
}

struct TiltChainResult {
  std::vector<SpinConfig> samples;
  std::vector<long long> sums;
  long long proposals = 0;
  long long accepted = 0;
};

TiltChainResult run_tilt_chain(int n, double beta, long long threshold, double field, int thermalize, int sweeps,
                               int stride, RngStream rng, bool keep_states) {
  auto chain = ClusterSampler::ising(n, beta, SpinBoundary::plus, rng, field);
  chain.set_spins(droplet_seed(n, threshold));
  std::vector<std::int8_t> scratch;
  TiltChainResult out;
  for (int s = 0; s < thermalize; ++s) constrained_sweep(chain, threshold, scratch);
  for (int s = 1; s <= sweeps; ++s) {
    ++out.proposals;
    out.accepted += constrained_sweep(chain, threshold, scratch);
    if (s % stride != 0) continue;
    out.sums.push_back(chain.magnetization());
    if (keep_states) out.samples.push_back(chain.spin_config());
  }
  return out;
}

}  // namespace

double calibrate_tilt(int n, double beta, double delta, int pilot_sweeps, RngStream rng, double margin) {
  const long long threshold = deficit_threshold(n, beta, delta);
  const double target = (1.0 - delta - margin) * onsager_mstar(beta) * n * n;
  auto pilot_mean = [&](double h, int index) {
    const auto run = run_tilt_chain(n, beta, threshold, h, pilot_sweeps / 4, pilot_sweeps, 1,
                                    rng.split(static_cast<std::uint64_t>(index)), false);
    double sum = 0.0;
    for (auto m : run.sums) sum += static_cast<double>(m);
    return sum / static_cast<double>(run.sums.size());
  };
  if (pilot_mean(0.0, 0) <= target) return 0.0;
  double lo = -0.1;  // pushes the mean below target
  double hi = 0.0;   // leaves it above
  for (int it = 1; it <= 14; ++it) {
    const double mid = 0.5 * (lo + hi);
    (pilot_mean(mid, it) > target ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

double field_for_mean(int n, double beta, double target, int pilot_sweeps, RngStream rng) {
  auto pilot_mean = [&](double h, int index) {
    auto chain = ClusterSampler::ising(n, beta, SpinBoundary::plus, rng.split(static_cast<std::uint64_t>(index)), h);
    chain.run(pilot_sweeps / 4);
    double sum = 0.0;
    for (int s = 0; s < pilot_sweeps; ++s) {
      chain.sweep();
      sum += static_cast<double>(chain.magnetization());
    }
    return sum / pilot_sweeps;
  };
  double lo = -0.1;
  double hi = 0.0;
  for (int it = 0; it < 14; ++it) {
    const double mid = 0.5 * (lo + hi);
    (pilot_mean(mid, it) > target ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

ConditionedSamples conditioned_sample(const ConditionedParams& params, RngStream rng) {
  if (params.sweeps < 1 || params.stride < 1 || params.chains < 1) throw ConfigError("sweeps, stride and chains must be positive");
  ConditionedSamples out;
  out.threshold = deficit_threshold(params.n, params.beta, params.delta);
  const bool tilt = params.strategy == ConditioningStrategy::tilt;
  if (tilt) {
    out.field = params.field ? *params.field
                             : calibrate_tilt(params.n, params.beta, params.delta, params.pilot_sweeps,
                                              rng.split(std::numeric_limits<std::uint32_t>::max()));
  }
  std::vector<TiltChainResult> runs(static_cast<std::size_t>(params.chains));
  parallel_for(params.chains, params.threads, [&](int c) {
    auto stream = rng.split(static_cast<std::uint64_t>(c));
    auto& run = runs[static_cast<std::size_t>(c)];
    if (tilt) {
      run = run_tilt_chain(params.n, params.beta, out.threshold, out.field, params.thermalize, params.sweeps,
                           params.stride, stream, true);
      return;
    }
    auto chain = ClusterSampler::ising(params.n, params.beta, SpinBoundary::plus, stream);
    chain.run(params.thermalize);
    for (int s = 1; s <= params.sweeps; ++s) {
      chain.sweep();
      if (s % params.stride != 0) continue;
      ++run.proposals;
      if (chain.magnetization() > out.threshold) continue;
      ++run.accepted;
      run.sums.push_back(chain.magnetization());
      run.samples.push_back(chain.spin_config());
    }
  });
  long long proposals = 0, accepted = 0;
  std::vector<double> log_weights;
  for (int c = 0; c < params.chains; ++c) {
    auto& run = runs[static_cast<std::size_t>(c)];
    proposals += run.proposals;
    accepted += run.accepted;
    for (std::size_t k = 0; k < run.samples.size(); ++k) {
      out.samples.push_back(std::move(run.samples[k]));
      out.chain.push_back(c);
      log_weights.push_back(-out.field * static_cast<double>(run.sums[k]));
    }
  }
  out.acceptance = proposals > 0 ? static_cast<double>(accepted) / static_cast<double>(proposals) : 0.0;
  if (out.samples.empty()) {
    throw StarvationError("no state satisfied the magnetization constraint in " + std::to_string(proposals) +
                              " recorded states",
                          out.acceptance);
  }
  const double top = *std::max_element(log_weights.begin(), log_weights.end());
  double sum = 0.0, sum_sq = 0.0;
  for (double lw : log_weights) {
    const double w = std::exp(lw - top);
    out.weights.push_back(w);
    sum += w;
    sum_sq += w * w;
  }
  for (double& w : out.weights) w /= sum;
  out.effective_samples = sum * sum / sum_sq;
  return out;
}

namespace {

Estimate mean_and_error(std::span<const double> values) {
  Estimate e;
  if (values.empty()) return e;
  const double k = static_cast<double>(values.size());
  e.mean = std::accumulate(values.begin(), values.end(), 0.0) / k;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - e.mean) * (v - e.mean);
    e.std_error = std::sqrt(ss / (k - 1.0) / k);
  }
  return e;
}

struct LevelRun {
  double log_probability = 0.0;
  int levels = 0;
};

LevelRun run_levels(const LevelParams& params, long long threshold, RngStream rng) {
  const int sweeps = params.sweeps_per_level;
  auto chain = ClusterSampler::ising(params.n, params.beta, SpinBoundary::plus, rng);
  chain.run(params.thermalize);
  std::vector<std::int8_t> scratch;
  std::vector<long long> sums(static_cast<std::size_t>(sweeps));
  std::vector<std::vector<std::int8_t>> states(static_cast<std::size_t>(sweeps));
  long long wall = std::numeric_limits<long long>::max();
  LevelRun out;
  while (true) {
    for (int s = 0; s < sweeps; ++s) {
      constrained_sweep(chain, wall, scratch);
      sums[static_cast<std::size_t>(s)] = chain.magnetization();
      const auto spins = chain.spins();
      states[static_cast<std::size_t>(s)].assign(spins.begin(), spins.end());
    }
    auto sorted = sums;
    const auto pos = static_cast<std::size_t>(params.quantile * (sweeps - 1));
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(pos), sorted.end());
    long long next = sorted[pos];
    const bool last = next <= threshold;
    if (last) next = threshold;
    const auto hits = std::count_if(sums.begin(), sums.end(), [&](long long m) { return m <= next; });
    if (hits == 0) throw StarvationError("level chain never reached the final threshold", 0.0);
    out.log_probability += std::log(static_cast<double>(hits) / sweeps);
    ++out.levels;
    if (last) return out;
    if (next >= wall) throw AlgorithmError("level chain is stuck", "wall=" + std::to_string(wall));
    wall = next;
    // Continue from the latest state inside the new wall.
    for (int s = sweeps - 1; s >= 0; --s) {
      if (sums[static_cast<std::size_t>(s)] <= wall) {
        chain.set_spins(states[static_cast<std::size_t>(s)]);
        break;
      }
    }
  }
}

}  // namespace

DeficitEstimate deficit_probability_levels(const LevelParams& params, RngStream rng) {
  if (params.replicas < 1 || params.sweeps_per_level < 10) throw ConfigError("need replicas >= 1 and >= 10 sweeps per level");
  if (!(params.quantile > 0.0 && params.quantile < 1.0)) throw ConfigError("quantile must lie in (0, 1)");
  DeficitEstimate out;
  out.threshold = deficit_threshold(params.n, params.beta, params.delta);
  std::vector<LevelRun> runs(static_cast<std::size_t>(params.replicas));
  parallel_for(params.replicas, params.threads, [&](int r) {
    runs[static_cast<std::size_t>(r)] = run_levels(params, out.threshold, rng.split(static_cast<std::uint64_t>(r)));
  });
  std::vector<double> logs;
  for (const auto& run : runs) {
    logs.push_back(run.log_probability);
    out.levels = std::max(out.levels, run.levels);
  }
  const auto e = mean_and_error(logs);
  out.log_probability = e.mean;
  out.std_error = e.std_error;
  return out;
}

DeficitEstimate deficit_probability_rejection(int n, double beta, double delta, int sweeps, RngStream rng) {
  if (sweeps < 20) throw ConfigError("rejection estimate needs at least 20 sweeps");
  DeficitEstimate out;
  out.threshold = deficit_threshold(n, beta, delta);
  auto chain = ClusterSampler::ising(n, beta, SpinBoundary::plus, rng);
  chain.run(200);
  std::vector<double> hits(static_cast<std::size_t>(sweeps));
  for (int s = 0; s < sweeps; ++s) {
    chain.sweep();
    hits[static_cast<std::size_t>(s)] = chain.magnetization() <= out.threshold ? 1.0 : 0.0;
  }
  const auto e = batch_means(hits);
  if (e.mean <= 0.0) throw StarvationError("no sweep satisfied the magnetization constraint", 0.0);
  out.log_probability = std::log(e.mean);
  out.std_error = e.std_error / e.mean;
  out.levels = 1;
  return out;
}

DeficitEstimate deficit_probability_tilt(int n, double beta, double delta, int windows, int sweeps_per_window,
                                         RngStream rng) {
  if (windows < 2 || sweeps_per_window < 40) throw ConfigError("need >= 2 windows and >= 40 sweeps per window");
  DeficitEstimate out;
  out.threshold = deficit_threshold(n, beta, delta);
  const double deepest = field_for_mean(n, beta, static_cast<double>(out.threshold), 300, rng.split(1000));
  // Four interleaved batches of every window give four ladder estimates.
  constexpr int kBatches = 4;
  std::vector<std::vector<LadderWindow>> batches(kBatches, std::vector<LadderWindow>(static_cast<std::size_t>(windows)));
  auto chain = ClusterSampler::ising(n, beta, SpinBoundary::plus, rng.split(0));
  chain.run(200);
  for (int k = 0; k < windows; ++k) {
    const double h = deepest * k / (windows - 1);
    chain.set_field(h);
    chain.run(50);
    for (int b = 0; b < kBatches; ++b) batches[static_cast<std::size_t>(b)][static_cast<std::size_t>(k)].lambda = h;
    for (int s = 0; s < sweeps_per_window; ++s) {
      chain.sweep();
      const long long m = chain.magnetization();
      const auto b = static_cast<std::size_t>(s * kBatches / sweeps_per_window);
      batches[b][static_cast<std::size_t>(k)].add(m, m <= out.threshold);
    }
  }
  std::vector<double> logs;
  for (const auto& batch : batches) logs.push_back(ladder_log_probability(batch, 0.0).log_probability);
  const auto e = mean_and_error(logs);
  out.log_probability = e.mean;
  out.std_error = e.std_error;
  out.levels = windows;
  return out;
}

double predicted_rate(double delta, AreaConvention convention, double tau_c) {
  return tau_c * 2.0 * std::sqrt(std::numbers::pi * droplet_area(delta, convention));
}

}  // namespace wulff
