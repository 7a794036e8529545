#include "wulff/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "wulff/errors.hpp"
#include "wulff/interface.hpp"

namespace wulff {

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw ConfigError("linear fit needs at least two points");
  const double count = static_cast<double>(x.size());
  const double mean_x = std::accumulate(x.begin(), x.end(), 0.0) / count;
  const double mean_y = std::accumulate(y.begin(), y.end(), 0.0) / count;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mean_x) * (x[i] - mean_x);
    sxy += (x[i] - mean_x) * (y[i] - mean_y);
    syy += (y[i] - mean_y) * (y[i] - mean_y);
  }
  if (sxx == 0.0) throw ConfigError("linear fit needs distinct abscissae");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = mean_y - fit.slope * mean_x;
  fit.r_squared = syy == 0.0 ? 1.0 : sxy * sxy / (sxx * syy);
  return fit;
}

SamplerValidity sampler_validity(int n, double p, const BoundaryCondition& bc, long long sweeps, RngStream rng) {
  if (sweeps < 1) throw ConfigError("need at least one sweep");
  const Lattice lattice(n);
  if (lattice.edge_count() > kMaxEnumeratedEdges) throw OracleSizeError("box too large for exhaustive enumeration");
  const int edges = lattice.edge_count();
  std::map<std::pair<int, int>, double> exact;
  double total = 0.0;
  for_each_fk_config(lattice, bc, [&](std::uint64_t, int open, int clusters) {
    const double w = std::pow(p, open) * std::pow(1.0 - p, edges - open) * std::pow(2.0, clusters);
    exact[{open, clusters}] += w;
    total += w;
  });
  ClusterSampler chain(n, p, bc, rng);
  chain.run(100);
  const auto block_of = bc.block_of_site(lattice);
  std::map<std::pair<int, int>, double> seen;
  for (long long s = 0; s < sweeps; ++s) {
    chain.sweep();
    const auto bonds = chain.bonds();
    const int open = static_cast<int>(std::count(bonds.begin(), bonds.end(), std::uint8_t{1}));
    seen[{open, count_clusters(lattice, bonds, block_of)}] += 1.0;
  }
  SamplerValidity out;
  out.sweeps = sweeps;
  auto keys = exact;
  for (const auto& [key, count] : seen) keys[key] += 0.0;
  for (const auto& [key, unused] : keys) {
    const double a = exact.contains(key) ? exact.at(key) / total : 0.0;
    const double b = seen.contains(key) ? seen.at(key) / static_cast<double>(sweeps) : 0.0;
    out.total_variation += 0.5 * std::abs(a - b);
  }
  out.histogram_bins = static_cast<int>(keys.size());
  return out;
}

MagnetizationStudy magnetization_study(int n, double beta, int sweeps, int thermalize, RngStream rng) {
  if (sweeps < 20) throw ConfigError("need at least 20 sweeps");
  auto chain = ClusterSampler::ising(n, beta, SpinBoundary::plus, rng);
  chain.run(thermalize);
  std::vector<double> values(static_cast<std::size_t>(sweeps));
  const double sites = static_cast<double>(chain.lattice().site_count());
  for (auto& v : values) {
    chain.sweep();
    v = static_cast<double>(chain.magnetization()) / sites;
  }
  return {batch_means(values), onsager_mstar(beta)};
}

TensionStudy tension_study(const TensionParams& params, RngStream rng) {
  TensionStudy out;
  out.beta = params.beta;
  out.beta_hat = dual_beta(params.beta);
  TwoPointParams two_point;
  two_point.n = params.n;
  two_point.beta_hat = out.beta_hat;
  two_point.k_min = 0;
  two_point.k_max = params.k_max;
  two_point.samples = params.samples;
  out.profile = two_point_profile(two_point, rng);
  out.fit = fit_decay(out.profile, params.k_min, params.k_max, true);
  out.plain_fit = fit_decay(out.profile, params.k_min, params.k_max, false);
  out.exact = exact_tension(params.beta);
  constexpr double step = 1e-3;
  out.critical_slope = exact_tension(critical().beta_c + step) / step;
  return out;
}

IsotropyTrend isotropy_trend(const IsotropyPoint& cold, int cold_samples, const IsotropyPoint& warm, int warm_samples,
                             RngStream rng) {
  IsotropyTrend out{cold, warm, 0.0, 0.0};
  for (int side = 0; side < 2; ++side) {
    IsotropyPoint& point = side == 0 ? out.cold : out.warm;
    point.estimate = isotropy_ratio(point.beta, point.torus, side == 0 ? cold_samples : warm_samples,
                                    rng.split(static_cast<std::uint64_t>(side)));
    point.exact_ratio = exact_diagonal_tension(point.beta) / (std::sqrt(2.0) * exact_tension(point.beta));
  }
  out.improvement = std::abs(out.cold.estimate.ratio - 1.0) - std::abs(out.warm.estimate.ratio - 1.0);
  out.improvement_error = std::hypot(out.cold.estimate.ratio_error, out.warm.estimate.ratio_error);
  return out;
}

int InterfaceStress::failures() const {
  return diameter_failures + count_failures + budget_failures + monotone_failures + bound_failures + upsilon_failures +
         errors + oracle_mismatches;
}

namespace {

// Two horizontal bands of Bernoulli edges; most instances also get wiggly open
// vertical strands through D and sometimes an open band along its top or bottom,
// which is what produces crossing clusters and tunnels.
EdgeConfig stress_configuration(const Lattice& lattice, const SepGeometry& g, RngStream& rng) {
  const int n = lattice.side();
  auto omega = EdgeConfig::uniform(lattice, false, BoundaryCondition::free());
  const double p_low = 0.25 + 0.45 * rng.uniform(), p_high = 0.25 + 0.45 * rng.uniform();
  const int split = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
  for (int e = 0; e < lattice.edge_count(); ++e) {
    const Site s = lattice.site(lattice.edge(e).a);
    omega.open[static_cast<std::size_t>(e)] = rng.bernoulli(s.y < split ? p_low : p_high) ? 1 : 0;
  }
  if (rng.uniform() >= 0.7) return omega;
  auto open = [&](Site a, Site b) { omega.open[static_cast<std::size_t>(lattice.edge_between(a, b))] = 1; };
  const int left = g.origin.x, bottom = g.origin.y;
  const int strands = 1 + static_cast<int>(rng.below(3));
  for (int k = 0; k < strands; ++k) {
    int x = left + static_cast<int>(rng.below(static_cast<std::uint64_t>(g.cols)));
    for (int v = 0; v + 1 < g.rows; ++v) {
      if (rng.uniform() < 0.2) {
        const int next = std::clamp(x + (rng.uniform() < 0.5 ? -1 : 1), left, left + g.cols - 1);
        if (next != x) open({x, bottom + v}, {next, bottom + v});
        x = next;
      }
      open({x, bottom + v}, {x, bottom + v + 1});
    }
  }
  const auto band = rng.below(3);  // none, top, bottom
  if (band != 0) {
    const int offset = static_cast<int>(rng.below(3));
    const int y = band == 1 ? bottom + g.rows - 1 - offset : bottom + offset;
    for (int x = left; x + 1 < left + g.cols; ++x) {
      if (rng.uniform() < 0.9) open({x, y}, {x + 1, y});
    }
  }
  return omega;
}

}  // namespace

InterfaceStress interface_stress(const InterfaceStressParams& params, RngStream rng) {
  const Lattice lattice(params.n);
  const SepGeometry geometry = build_sep_geometry(params.n, {0.0, 0.0}, params.radius, {0, 1}, params.eta, params.rho);
  constexpr double deltas[] = {0.003, 0.005, 0.01, 0.02};
  InterfaceStress out;
  while (out.instances < params.instances) {
    ++out.tried;
    if (out.tried > 1000 * std::max(params.instances, 1)) throw StarvationError("no separation instances found", 0.0);
    const EdgeConfig omega = stress_configuration(lattice, geometry, rng);
    const double delta = deltas[rng.below(4)];
    const int threshold = 2 + static_cast<int>(rng.below(3));
    const SepDomain domain(lattice, omega, geometry);
    const auto witness = sep_search(domain, delta, 1.0, threshold);
    if (!witness) continue;
    ++out.instances;
    const double ell = 0.9 * delta * params.n * rng.uniform() + 1e-3;
    try {
      std::vector<FilledCluster> fills;
      for (int c : domain.crossing()) fills.push_back(fill_cluster(domain, c, threshold));
      if (!fills.empty()) ++out.with_crossing;
      const CutHeights cuts = select_cut_heights(domain, fills, witness->partition, delta);
      const InterfaceResult result = extract_interface(domain, cuts, threshold, delta, fills);
      out.max_count = std::max(out.max_count, result.count());
      if (out.first_trace.empty() && !fills.empty()) out.first_trace = trace_lines(domain, result);
      out.diameter_failures += result.diameter_ok ? 0 : 1;
      out.count_failures += result.count_ok ? 0 : 1;
      out.budget_failures += result.budget_ok ? 0 : 1;
      out.monotone_failures += result.monotone ? 0 : 1;
      const SeparatedInterface separated = separate_interface(result, ell, geometry, delta);
      out.bound_failures += separated.eq13_holds ? 0 : 1;
      out.upsilon_failures += separated.upsilon_holds ? 0 : 1;
      if (domain.crossing().empty()) {
        ++out.oracle_checked;
        const auto oracle = dual_crossing(domain);
        const bool agree = oracle && result.count() == 1 && result.paths[0].sites.size() == oracle->sites.size();
        out.oracle_mismatches += agree ? 0 : 1;
      }
    } catch (const std::exception& e) {
      if (out.errors++ == 0) out.first_error = e.what();
    }
  }
  return out;
}

DropletStudy droplet_study(const DropletStudyParams& params, RngStream rng) {
  ConditionedParams conditioned;
  conditioned.n = params.n;
  conditioned.beta = params.beta > 0.0 ? params.beta : critical().beta_c + 0.03;
  conditioned.delta = params.delta;
  conditioned.strategy = ConditioningStrategy::tilt;
  conditioned.sweeps = params.sweeps;
  conditioned.stride = params.stride;
  conditioned.thermalize = params.thermalize;
  conditioned.chains = params.chains;
  conditioned.threads = params.threads;
  conditioned.field = params.field;
  DropletStudy out;
  out.conditioned = conditioned_sample(conditioned, rng);
  const auto& samples = out.conditioned.samples;
  const auto& weights = out.conditioned.weights;
  const double mstar = onsager_mstar(conditioned.beta);
  std::vector<SignedMeasure> measures;
  measures.reserve(samples.size());
  for (std::size_t k = 0; k < samples.size(); ++k) {
    measures.push_back(sigma_measure(samples[k], mstar, params.n));
    const Point2 b = barycenter(measures.back());
    out.barycenter.u += weights[k] * b.u;
    out.barycenter.v += weights[k] * b.v;
  }
  // The target ball is centred from the ensemble barycenter: per-sample centres
  // can push the ball out of Q.
  const SignedMeasure target_full =
      target_w(params.delta, out.barycenter, AreaConvention::full, params.n, CenterShift::area_consistent);
  const SignedMeasure target_half =
      target_w(params.delta, out.barycenter, AreaConvention::half, params.n, CenterShift::area_consistent);
  for (std::size_t k = 0; k < samples.size(); ++k) {
    DropletRecord record{droplet_extract(samples[k]), weights[k]};
    out.mean_circularity += weights[k] * record.shape.circularity.value_or(0.0);
    out.distance_full += weights[k] * weak_distance(measures[k], target_full);
    out.distance_half += weights[k] * weak_distance(measures[k], target_half);
    out.droplets.push_back(std::move(record));
  }
  out.best = out.distance_full < out.distance_half ? AreaConvention::full : AreaConvention::half;
  return out;
}

RateEstimate ldp_rate(std::span<const int> sizes, const LevelParams& level, double tau_c, RngStream rng) {
  const double excess = level.beta - critical().beta_c;
  if (!(excess > 0.0)) throw ConfigError("the rate needs beta > beta_c");
  RateEstimate out;
  out.delta = level.delta;
  out.tau_c = tau_c;
  out.j_full = predicted_rate(level.delta, AreaConvention::full, tau_c);
  out.j_half = predicted_rate(level.delta, AreaConvention::half, tau_c);
  for (int n : sizes) {
    LevelParams at = level;
    at.n = n;
    RatePoint point;
    point.n = n;
    point.beta = level.beta;
    point.estimate = deficit_probability_levels(at, rng.split(static_cast<std::uint64_t>(n)));
    point.rate = -point.estimate.log_probability / (excess * n);
    point.rate_error = point.estimate.std_error / (excess * n);
    out.points.push_back(point);
  }
  return out;
}

std::vector<AreaConvention> matching_conventions(const RateEstimate& rates, double rate, double tolerance) {
  std::vector<AreaConvention> out;
  if (std::abs(rate - rates.j_full) <= tolerance * rates.j_full) out.push_back(AreaConvention::full);
  if (std::abs(rate - rates.j_half) <= tolerance * rates.j_half) out.push_back(AreaConvention::half);
  return out;
}

BlockDecay block_decay(const BlockDecayParams& params, RngStream rng) {
  if (params.sizes.size() < 2) throw ConfigError("block decay needs at least two sizes");
  BlockDecay out;
  out.p = params.p;
  std::vector<double> sizes, logs;
  for (int k : params.sizes) {
    const Lattice lattice(k);
    CutLadderParams ladder;
    ladder.n = k;
    ladder.p = params.p;
    ladder.bc = BoundaryCondition::free();
    ladder.biases = linear_biases(params.windows, params.max_bias);
    ladder.sweeps = params.sweeps;
    ladder.thermalize = params.thermalize;
    ladder.replicas = params.replicas;
    out.points.push_back({k, cut_zero_log_probability(ladder, box_crossing_statistic(lattice, lattice.bounds()),
                                                      rng.split(static_cast<std::uint64_t>(k)))});
    sizes.push_back(k);
    logs.push_back(out.points.back().ladder.log_probability);
  }
  out.fit = linear_fit(sizes, logs);
  out.decreasing = true;
  for (std::size_t i = 1; i < logs.size(); ++i) out.decreasing = out.decreasing && logs[i] < logs[i - 1];
  return out;
}

ContiguityPoint contiguity_study(const ContiguityParams& params, RngStream rng) {
  if (params.samples < 2 || params.spacing < 1) throw ConfigError("contiguity needs samples >= 2 and spacing >= 1");
  const double beta = params.beta > 0.0 ? params.beta : critical().beta_c + 0.05;
  const double mstar = onsager_mstar(beta);
  auto chain = ClusterSampler::ising(params.n, beta, SpinBoundary::plus, rng);
  chain.run(params.thermalize);
  ContiguityPoint out;
  out.n = params.n;
  out.k = params.k;
  std::vector<double> distances;
  for (int s = 0; s < params.samples; ++s) {
    chain.run(params.spacing);
    const SpinConfig sigma = chain.spin_config();
    const RoughMeasure rough = rough_measure(chain.lattice(), chain.edge_config(), sigma, params.k);
    distances.push_back(contiguity_distance(sigma, rough, mstar));
    out.large_clusters += rough.large_clusters;
    out.bad_blocks += rough.bad_blocks;
    out.minus_area += rough.minus.area();
  }
  const double count = params.samples;
  out.large_clusters /= count;
  out.bad_blocks /= count;
  out.minus_area /= count;
  out.distance = batch_means(distances, std::min(20, params.samples));
  return out;
}

WallRate wall_rate(const WallParams& params, RngStream rng) {
  const double p_c = critical().p_c;
  if (!(params.p > p_c && params.p < 1.0)) throw ConfigError("the wall rate needs p_c < p < 1");
  if (params.n < 2 || params.margin < 1) throw ConfigError("wall needs n >= 2 and margin >= 1");
  WallRate out;
  out.n = params.n;
  out.p = params.p;
  out.half_width = params.half_width > 0.0 ? params.half_width : std::sqrt(static_cast<double>(params.n));
  const int offset = static_cast<int>(std::ceil(out.half_width)) + params.margin;
  out.box = params.n + 2 * offset + 1;
  const Lattice lattice(out.box);
  const int row = out.box / 2;
  const HalfPoint start{2 * offset + 1, 2 * row + 1};
  const HalfPoint target{2 * (offset + params.n) + 1, 2 * row + 1};
  CutGraph graph = wall_cut_graph(lattice, start, target, out.half_width);
  CutLadderParams ladder;
  ladder.n = out.box;
  ladder.p = params.p;
  ladder.bc = BoundaryCondition::wired();
  ladder.biases = linear_biases(params.windows, params.max_bias);
  ladder.sweeps = params.sweeps;
  ladder.thermalize = params.thermalize;
  ladder.replicas = params.replicas;
  ladder.local_edges = graph.edges();
  ladder.cut_edges = ladder.local_edges;
  out.ladder = cut_zero_log_probability(ladder, cut_graph_statistic(std::move(graph)), rng);
  out.per_length = -out.ladder.log_probability / params.n;
  out.rate = out.per_length / (params.p - p_c);
  out.predicted = exact_tension(beta_of_p(params.p)) / (params.p - p_c);
  out.ratio = out.rate / out.predicted;
  return out;
}

}  // namespace wulff
