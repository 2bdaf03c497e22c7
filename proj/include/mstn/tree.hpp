#pragma once

#include <vector>

#include "mstn/instance.hpp"

namespace mstn {

// A spanning tree as a sorted set of edge ids. Construction verifies the
// spanning/acyclic invariant against the instance.
class Tree {
 public:
  Tree(const Instance& instance, std::vector<int> edge_ids);

  const std::vector<int>& edge_ids() const { return edge_ids_; }
  int size() const { return static_cast<int>(edge_ids_.size()); }
  bool contains(int edge_id) const;

  // 0/1 incidence over all instance edges (the x variables).
  std::vector<double> incidence(const Instance& instance) const;

  bool operator==(const Tree& other) const { return edge_ids_ == other.edge_ids_; }
  bool operator!=(const Tree& other) const { return edge_ids_ != other.edge_ids_; }
  bool operator<(const Tree& other) const { return edge_ids_ < other.edge_ids_; }

 private:
  std::vector<int> edge_ids_;
};

// Per-edge nonnegative weights, indexed by edge id.
using WeightVector = std::vector<double>;

// Union-find with path halving; deterministic.
class DisjointSets {
 public:
  explicit DisjointSets(int n) : parent_(n), size_(n, 1) {
    for (int i = 0; i < n; ++i) parent_[i] = i;
  }

  int find(int v) {
    while (parent_[v] != v) {
      parent_[v] = parent_[parent_[v]];
      v = parent_[v];
    }
    return v;
  }

  // False when already joined.
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    return true;
  }

 private:
  std::vector<int> parent_;
  std::vector<int> size_;
};

}  // namespace mstn
