#include "wulff/tension.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wulff/dsu.hpp"
#include "wulff/errors.hpp"
#include "wulff/model.hpp"

namespace wulff {

DecayFit fit_decay(std::span<const Estimate> profile, int k_min, int k_max, bool ornstein_zernike) {
  if (k_min < 1 || k_max <= k_min || k_max >= static_cast<int>(profile.size())) {
    throw ConfigError("fit window must satisfy 1 <= k_min < k_max < profile size");
  }
  std::vector<double> xs, ys;
  for (int k = k_min; k <= k_max; ++k) {
    const double g = profile[static_cast<std::size_t>(k)].mean;
    if (!(g > 0.0)) throw ConfigError("two-point estimate is not positive at k = " + std::to_string(k));
    xs.push_back(k);
    ys.push_back(-std::log(g) - (ornstein_zernike ? 0.5 * std::log(static_cast<double>(k)) : 0.0));
  }
  const double count = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i] / count;
    my += ys[i] / count;
  }
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  DecayFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  return fit;
}

WallCorrelators wall_correlators(const WallCorrelatorParams& params, RngStream rng) {
  const int L = params.torus;
  if (L < 8 || L % 2 != 0) throw ConfigError("torus side must be even and at least 8");
  if (!(params.beta_hat > 0.0 && params.beta_hat < critical().beta_c)) {
    throw ConfigError("wall correlators need a subcritical coupling");
  }
  if (params.batches < 2 || params.samples < params.batches) throw ConfigError("need samples >= batches >= 2");
  const int sites = L * L;
  const int half = L / 2;
  const auto threshold = static_cast<std::uint64_t>(std::ldexp(p_of_beta(params.beta_hat), 64));
  std::vector<std::int8_t> spins(static_cast<std::size_t>(sites), 1);
  DisjointSets dsu(sites);
  std::vector<std::int8_t> color(static_cast<std::size_t>(sites));
  std::vector<int> root(static_cast<std::size_t>(sites));
  std::vector<int> start(static_cast<std::size_t>(sites) + 1);
  std::vector<int> members(static_cast<std::size_t>(sites));
  std::vector<int> column_count(static_cast<std::size_t>(L)), line_count(static_cast<std::size_t>(L));
  std::vector<int> columns, lines;

  WallCorrelators out;
  out.torus = L;
  out.axis.assign(static_cast<std::size_t>(params.batches), std::vector<double>(static_cast<std::size_t>(half) + 1, 0.0));
  out.diagonal = out.axis;
  const int per_batch = params.samples / params.batches;

  auto accumulate = [&](std::vector<int>& touched, std::vector<int>& counts, std::vector<double>& into) {
    for (int u : touched) {
      for (int v : touched) {
        int t = std::abs(u - v);
        t = std::min(t, L - t);
        into[static_cast<std::size_t>(t)] += static_cast<double>(counts[static_cast<std::size_t>(u)]) *
                                             counts[static_cast<std::size_t>(v)];
      }
    }
    for (int u : touched) counts[static_cast<std::size_t>(u)] = 0;
    touched.clear();
  };

  const int total = params.thermalize + per_batch * params.batches;
  for (int it = 0; it < total; ++it) {
    dsu.reset(sites);
    for (int y = 0; y < L; ++y) {
      for (int x = 0; x < L; ++x) {
        const int i = y * L + x;
        const int right = y * L + (x + 1) % L;
        const int up = ((y + 1) % L) * L + x;
        if (spins[static_cast<std::size_t>(i)] == spins[static_cast<std::size_t>(right)] && rng() < threshold) dsu.unite(i, right);
        if (spins[static_cast<std::size_t>(i)] == spins[static_cast<std::size_t>(up)] && rng() < threshold) dsu.unite(i, up);
      }
    }
    std::fill(color.begin(), color.end(), 0);
    for (int i = 0; i < sites; ++i) {
      const int r = dsu.find(i);
      root[static_cast<std::size_t>(i)] = r;
      auto& c = color[static_cast<std::size_t>(r)];
      if (c == 0) c = rng.uniform() < 0.5 ? 1 : -1;
      spins[static_cast<std::size_t>(i)] = c;
    }
    if (it < params.thermalize) continue;
    // Group sites by cluster root (counting sort).
    std::fill(start.begin(), start.end(), 0);
    for (int i = 0; i < sites; ++i) ++start[static_cast<std::size_t>(root[static_cast<std::size_t>(i)]) + 1];
    for (int r = 0; r < sites; ++r) start[static_cast<std::size_t>(r) + 1] += start[static_cast<std::size_t>(r)];
    {
      auto fill = start;
      for (int i = 0; i < sites; ++i) members[static_cast<std::size_t>(fill[static_cast<std::size_t>(root[static_cast<std::size_t>(i)])]++)] = i;
    }
    const auto batch = static_cast<std::size_t>((it - params.thermalize) / per_batch);
    auto& axis = out.axis[batch];
    auto& diagonal = out.diagonal[batch];
    for (int r = 0; r < sites; ++r) {
      const int b = start[static_cast<std::size_t>(r)], e = start[static_cast<std::size_t>(r) + 1];
      for (int k = b; k < e; ++k) {
        const int i = members[static_cast<std::size_t>(k)];
        const int x = i % L, y = i / L, d = (x + y) % L;
        if (column_count[static_cast<std::size_t>(x)]++ == 0) columns.push_back(x);
        if (line_count[static_cast<std::size_t>(d)]++ == 0) lines.push_back(d);
      }
      accumulate(columns, column_count, axis);
      accumulate(lines, line_count, diagonal);
    }
  }
  for (auto* set : {&out.axis, &out.diagonal}) {
    for (auto& row : *set) {
      for (double& c : row) c /= per_batch;
    }
  }
  return out;
}

namespace {

std::vector<double> batch_sum(const std::vector<std::vector<double>>& batches, int skip) {
  std::vector<double> sum(batches.front().size(), 0.0);
  for (std::size_t b = 0; b < batches.size(); ++b) {
    if (static_cast<int>(b) == skip) continue;
    for (std::size_t t = 0; t < sum.size(); ++t) sum[t] += batches[b][t];
  }
  return sum;
}

// On a torus of side L the single-state correlator is proportional to
// cosh(m (L/2 - t)); solve C(t_min)/C(t_max) for m by bisection.
double window_mass(const std::vector<double>& c, int t_min, int t_max) {
  const double half = static_cast<double>(c.size() - 1);
  const double target = std::log(c[static_cast<std::size_t>(t_min)] / c[static_cast<std::size_t>(t_max)]);
  auto log_ratio = [&](double m) {
    // log cosh(m a) - log cosh(m b) computed stably for large arguments.
    auto log_cosh = [](double x) { return x + std::log1p(std::exp(-2.0 * x)) - std::numbers::ln2; };
    return log_cosh(m * (half - t_min)) - log_cosh(m * (half - t_max));
  };
  if (!(target > 0.0)) return 0.0;
  double lo = 0.0, hi = 1.0;
  while (log_ratio(hi) < target && hi < 1e3) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (log_ratio(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

void place_window(const std::vector<double>& c, MassEstimate& m, MassWindow window) {
  const int last = static_cast<int>(c.size()) - 1;
  const double first = std::log(c[1] / c[2]);
  if (!(first > 0.0)) throw AlgorithmError("wall correlator does not decay", "C(1)=" + std::to_string(c[1]));
  m.t_min = std::clamp(static_cast<int>(std::ceil(window.start / first)), 1, last - 1);
  m.t_max = std::clamp(static_cast<int>(std::ceil(window.end / first)), m.t_min + 2, last);
  if (m.t_max > last) m.t_max = last;
}

}  // namespace

MassEstimate wall_mass(const std::vector<std::vector<double>>& batches, MassWindow window) {
  if (batches.size() < 2) throw ConfigError("jackknife needs at least two batches");
  MassEstimate m;
  const auto all = batch_sum(batches, -1);
  place_window(all, m, window);
  m.mass = window_mass(all, m.t_min, m.t_max);
  const double k = static_cast<double>(batches.size());
  double ss = 0.0;
  for (std::size_t b = 0; b < batches.size(); ++b) {
    const double d = window_mass(batch_sum(batches, static_cast<int>(b)), m.t_min, m.t_max) - m.mass;
    ss += d * d;
  }
  m.std_error = std::sqrt(ss * (k - 1.0) / k);
  return m;
}

IsotropyEstimate isotropy_ratio(double beta, int torus, int samples, RngStream rng, MassWindow window) {
  if (!(beta > critical().beta_c)) throw ConfigError("isotropy ratio needs beta above beta_c");
  WallCorrelatorParams params;
  params.beta_hat = dual_beta(beta);
  params.torus = torus;
  params.samples = samples;
  const auto corr = wall_correlators(params, rng);
  IsotropyEstimate out;
  out.axis = wall_mass(corr.axis, window);
  out.diagonal = wall_mass(corr.diagonal, window);
  out.ratio = std::numbers::sqrt2 * out.diagonal.mass / out.axis.mass;
  const double k = static_cast<double>(corr.axis.size());
  double ss = 0.0;
  for (std::size_t b = 0; b < corr.axis.size(); ++b) {
    const auto skip = static_cast<int>(b);
    const double r = std::numbers::sqrt2 * window_mass(batch_sum(corr.diagonal, skip), out.diagonal.t_min, out.diagonal.t_max) /
                     window_mass(batch_sum(corr.axis, skip), out.axis.t_min, out.axis.t_max);
    ss += (r - out.ratio) * (r - out.ratio);
  }
  out.ratio_error = std::sqrt(ss * (k - 1.0) / k);
  return out;
}

double exact_diagonal_tension(double beta) {
  if (!(beta > critical().beta_c)) return 0.0;
  return 2.0 * std::log(std::sinh(2.0 * beta));
}

}  // namespace wulff
