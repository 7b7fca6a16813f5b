#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

namespace spinbound {

class UnionFind {
 public:
  UnionFind() = default;
  explicit UnionFind(int n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  int find(int a) const {
    while (parent_[a] != a) {
      parent_[a] = parent_[parent_[a]];  // path halving
      a = parent_[a];
    }
    return a;
  }

  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (a > b) std::swap(a, b);  // deterministic: smaller index is the root
    parent_[b] = a;
    return true;
  }

  bool connected(int a, int b) const { return find(a) == find(b); }
  int size() const { return static_cast<int>(parent_.size()); }

 private:
  mutable std::vector<int> parent_;
};

// Union-find over a large vertex set where only a few vertices are touched
// per round. Reset is O(1) via epoch stamps, so millions of percolation
// replicas can reuse one instance.
class SparseUnionFind {
 public:
  explicit SparseUnionFind(int n) : parent_(n, 0), epoch_(n, 0), round_(0) {}

  void next_round() { ++round_; }

  int find(int a) {
    if (epoch_[a] != round_) {
      epoch_[a] = round_;
      parent_[a] = a;
      return a;
    }
    while (parent_[a] != a) {
      parent_[a] = parent_[parent_[a]];
      a = parent_[a];
    }
    return a;
  }

  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (a > b) std::swap(a, b);
    parent_[b] = a;
    return true;
  }

 private:
  std::vector<int> parent_;
  std::vector<std::uint32_t> epoch_;
  std::uint32_t round_;
};

}  // namespace spinbound
