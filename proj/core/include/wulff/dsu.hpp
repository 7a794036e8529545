#pragma once

#include <numeric>
#include <vector>

namespace wulff {

// Union-find with path halving and union by size.
class DisjointSets final {
 public:
  explicit DisjointSets(int count = 0) { reset(count); }

  void reset(int count) {
    parent_.resize(static_cast<std::size_t>(count));
    size_.assign(static_cast<std::size_t>(count), 1);
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  int find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    return true;
  }

  int size_of(int x) { return size_[find(x)]; }
  int count() const { return static_cast<int>(parent_.size()); }

 private:
  std::vector<int> parent_;
  std::vector<int> size_;
};

}  // namespace wulff
