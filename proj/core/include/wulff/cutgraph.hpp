#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace wulff {

// Dual graph whose every step crosses one primal edge. shortest() is the fewest
// open primal edges crossed by a path from a source to a target, the quantity
// that vanishes exactly when an open dual connection exists.
class CutGraph final {
 public:
  static constexpr int unreachable = std::numeric_limits<int>::max();

  int add_node(bool source, bool target);
  // Undirected step between two nodes across primal edge `edge`.
  void add_step(int a, int b, int edge);

  int node_count() const { return static_cast<int>(source_.size()); }
  // Primal edges crossed by some step, sorted and unique.
  std::vector<int> edges() const;

  // Result clamped to `cap`. Uses internal scratch, so one graph serves one thread.
  int shortest(std::span<const std::uint8_t> open, int cap = unreachable);

 private:
  void build();

  struct Step {
    int to;
    int edge;
  };
  std::vector<std::uint8_t> source_;
  std::vector<std::uint8_t> target_;
  std::vector<std::pair<int, Step>> pending_;
  std::vector<int> first_;
  std::vector<Step> steps_;
  bool built_ = false;
  std::vector<int> dist_;
  std::vector<int> current_;
  std::vector<int> next_;
};

}  // namespace wulff
