#include "wulff/cutgraph.hpp"

#include <algorithm>

#include "wulff/errors.hpp"

namespace wulff {

int CutGraph::add_node(bool source, bool target) {
  source_.push_back(source ? 1 : 0);
  target_.push_back(target ? 1 : 0);
  built_ = false;
  return node_count() - 1;
}

void CutGraph::add_step(int a, int b, int edge) {
  if (a < 0 || b < 0 || a >= node_count() || b >= node_count()) throw ConfigError("cut graph step out of range");
  if (edge < 0) throw ConfigError("cut graph step must cross a primal edge");
  pending_.push_back({a, {b, edge}});
  pending_.push_back({b, {a, edge}});
  built_ = false;
}

std::vector<int> CutGraph::edges() const {
  std::vector<int> out;
  for (const auto& [from, step] : pending_) out.push_back(step.edge);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void CutGraph::build() {
  first_.assign(static_cast<std::size_t>(node_count()) + 1, 0);
  for (const auto& [from, step] : pending_) ++first_[static_cast<std::size_t>(from) + 1];
  for (std::size_t i = 1; i < first_.size(); ++i) first_[i] += first_[i - 1];
  steps_.resize(pending_.size());
  std::vector<int> fill(first_.begin(), first_.end() - 1);
  for (const auto& [from, step] : pending_) steps_[static_cast<std::size_t>(fill[static_cast<std::size_t>(from)]++)] = step;
  dist_.assign(static_cast<std::size_t>(node_count()), unreachable);
  built_ = true;
}

// Dial's algorithm with two buckets: `current_` holds nodes at distance `level`,
// `next_` those at level + 1; stale entries are skipped on pop.
int CutGraph::shortest(std::span<const std::uint8_t> open, int cap) {
  if (!built_) build();
  std::fill(dist_.begin(), dist_.end(), unreachable);
  current_.clear();
  next_.clear();
  for (int v = 0; v < node_count(); ++v) {
    if (source_[static_cast<std::size_t>(v)]) {
      dist_[static_cast<std::size_t>(v)] = 0;
      current_.push_back(v);
    }
  }
  int level = 0;
  while (level < cap) {
    while (!current_.empty()) {
      const int v = current_.back();
      current_.pop_back();
      if (dist_[static_cast<std::size_t>(v)] != level) continue;
      if (target_[static_cast<std::size_t>(v)]) return level;
      for (int k = first_[static_cast<std::size_t>(v)]; k < first_[static_cast<std::size_t>(v) + 1]; ++k) {
        const Step& step = steps_[static_cast<std::size_t>(k)];
        const int cost = open[static_cast<std::size_t>(step.edge)] != 0 ? 1 : 0;
        auto& d = dist_[static_cast<std::size_t>(step.to)];
        if (level + cost >= d) continue;
        d = level + cost;
        (cost == 0 ? current_ : next_).push_back(step.to);
      }
    }
    if (next_.empty()) return cap;
    std::swap(current_, next_);
    ++level;
  }
  return cap;
}

}  // namespace wulff
