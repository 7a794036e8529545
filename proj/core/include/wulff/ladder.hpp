#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace wulff {

// Samples from a one-parameter exponential family  P_lambda(x) ~ exp(lambda s(x)) P_0(x)
// with an integer sufficient statistic s. Each window records, per value of s,
// how many samples it produced and how many of them satisfied the event.
struct LadderWindow {
  double lambda = 0.0;
  std::map<long long, std::pair<long long, long long>> counts;  // s -> (samples, event hits)

  void add(long long stat, bool event);
  long long total() const;
};

struct LadderResult {
  double log_probability = 0.0;  // log P_target[event]
  std::vector<double> log_partition;  // log Z(lambda_k) - log Z(lambda_0)
  int iterations = 0;
};

// Multiple-histogram (WHAM) reweighting of all windows onto lambda_target.
// Throws std::runtime_error if no sample satisfies the event.
LadderResult ladder_log_probability(std::span<const LadderWindow> windows, double lambda_target,
                                    double tolerance = 1e-10, int max_iterations = 100000);

// Smallest relative histogram overlap between neighbouring windows (sorted by
// lambda), a diagnostic for a ladder that is too sparse.
double ladder_min_overlap(std::span<const LadderWindow> windows);

}  // namespace wulff
