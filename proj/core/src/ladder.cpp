#include "wulff/ladder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace wulff {
namespace {

double log_sum_exp(std::span<const double> v) {
  double mx = -std::numeric_limits<double>::infinity();
  for (double x : v) mx = std::max(mx, x);
  if (!std::isfinite(mx)) return mx;
  double s = 0.0;
  for (double x : v) s += std::exp(x - mx);
  return mx + std::log(s);
}

}  // namespace

void LadderWindow::add(long long stat, bool event) {
  auto& c = counts[stat];
  ++c.first;
  if (event) ++c.second;
}

long long LadderWindow::total() const {
  long long t = 0;
  for (const auto& [s, c] : counts) t += c.first;
  return t;
}

LadderResult ladder_log_probability(std::span<const LadderWindow> windows, double lambda_target, double tolerance,
                                    int max_iterations) {
  if (windows.empty()) throw std::invalid_argument("ladder needs at least one window");
  // Pool the histograms over distinct statistic values.
  std::map<long long, std::pair<double, double>> pooled;
  std::vector<double> n_k;
  for (const auto& w : windows) {
    n_k.push_back(static_cast<double>(w.total()));
    for (const auto& [s, c] : w.counts) {
      pooled[s].first += static_cast<double>(c.first);
      pooled[s].second += static_cast<double>(c.second);
    }
  }
  std::vector<double> stat, count, hits;
  for (const auto& [s, c] : pooled) {
    stat.push_back(static_cast<double>(s));
    count.push_back(c.first);
    hits.push_back(c.second);
  }
  const std::size_t k = windows.size();
  const std::size_t m = stat.size();
  std::vector<double> f(k, 0.0), denom(m), terms(std::max(k, m));

  // Shift the statistic so exponents stay moderate.
  const double s0 = stat[m / 2];
  LadderResult res;
  for (res.iterations = 0; res.iterations < max_iterations; ++res.iterations) {
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < k; ++j) terms[j] = std::log(n_k[j]) + windows[j].lambda * (stat[i] - s0) - f[j];
      denom[i] = log_sum_exp(std::span<const double>(terms.data(), k));
    }
    double change = 0.0;
    std::vector<double> next(k);
    for (std::size_t j = 0; j < k; ++j) {
      for (std::size_t i = 0; i < m; ++i) terms[i] = std::log(count[i]) + windows[j].lambda * (stat[i] - s0) - denom[i];
      next[j] = log_sum_exp(std::span<const double>(terms.data(), m));
    }
    const double anchor = next[0];
    for (std::size_t j = 0; j < k; ++j) {
      next[j] -= anchor;
      change = std::max(change, std::abs(next[j] - f[j]));
    }
    f = std::move(next);
    if (change < tolerance) break;
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < k; ++j) terms[j] = std::log(n_k[j]) + windows[j].lambda * (stat[i] - s0) - f[j];
    denom[i] = log_sum_exp(std::span<const double>(terms.data(), k));
  }
  std::vector<double> all, ev;
  for (std::size_t i = 0; i < m; ++i) {
    const double base = lambda_target * (stat[i] - s0) - denom[i];
    all.push_back(std::log(count[i]) + base);
    if (hits[i] > 0) ev.push_back(std::log(hits[i]) + base);
  }
  if (ev.empty()) throw std::runtime_error("no sample satisfied the event");
  res.log_probability = log_sum_exp(ev) - log_sum_exp(all);
  res.log_partition.resize(k);
  for (std::size_t j = 0; j < k; ++j) res.log_partition[j] = f[j] - f[0];
  return res;
}

double ladder_min_overlap(std::span<const LadderWindow> windows) {
  std::vector<const LadderWindow*> sorted;
  for (const auto& w : windows) sorted.push_back(&w);
  std::sort(sorted.begin(), sorted.end(), [](auto* a, auto* b) { return a->lambda < b->lambda; });
  double worst = 1.0;
  for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
    const double ta = static_cast<double>(sorted[i]->total());
    const double tb = static_cast<double>(sorted[i + 1]->total());
    double overlap = 0.0;
    for (const auto& [s, c] : sorted[i]->counts) {
      auto it = sorted[i + 1]->counts.find(s);
      if (it != sorted[i + 1]->counts.end()) {
        overlap += std::min(static_cast<double>(c.first) / ta, static_cast<double>(it->second.first) / tb);
      }
    }
    worst = std::min(worst, overlap);
  }
  return worst;
}

}  // namespace wulff
