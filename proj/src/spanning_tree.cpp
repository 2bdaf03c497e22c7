#include "mstn/spanning_tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mstn/errors.hpp"

namespace mstn {

Tree::Tree(const Instance& instance, std::vector<int> edge_ids) : edge_ids_(std::move(edge_ids)) {
  std::sort(edge_ids_.begin(), edge_ids_.end());
  const int n = instance.num_vertices();
  if (static_cast<int>(edge_ids_.size()) != n - 1) {
    throw UsageError("Tree: expected " + std::to_string(n - 1) + " edges, got " +
                     std::to_string(edge_ids_.size()));
  }
  DisjointSets ds(n);
  for (int e : edge_ids_) {
    if (e < 0 || e >= instance.num_edges()) throw UsageError("Tree: edge id out of range");
    if (!ds.unite(instance.edges[e].first, instance.edges[e].second)) {
      throw UsageError("Tree: edge set contains a cycle");
    }
  }
  // n-1 cycle-free edges on n vertices always span.
}

bool Tree::contains(int edge_id) const {
  return std::binary_search(edge_ids_.begin(), edge_ids_.end(), edge_id);
}

std::vector<double> Tree::incidence(const Instance& instance) const {
  std::vector<double> x(instance.num_edges(), 0.0);
  for (int e : edge_ids_) x[e] = 1.0;
  return x;
}

double tree_weight(const Tree& tree, const WeightVector& weights) {
  double total = 0.0;
  for (int e : tree.edge_ids()) total += weights[e];
  return total;
}

namespace {

// Kruskal under (weight, edge id) order. Returns nullopt when constraints
// preclude a spanning tree.
std::optional<std::vector<int>> constrained_mst_edges(const Instance& instance,
                                                      const WeightVector& weights,
                                                      const std::vector<bool>& forced,
                                                      const std::vector<bool>& excluded) {
  const int n = instance.num_vertices();
  DisjointSets ds(n);
  std::vector<int> chosen;
  chosen.reserve(n - 1);
  for (int e = 0; e < instance.num_edges(); ++e) {
    if (forced[e]) {
      if (!ds.unite(instance.edges[e].first, instance.edges[e].second)) return std::nullopt;
      chosen.push_back(e);
    }
  }
  std::vector<int> order(instance.num_edges());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return weights[a] < weights[b]; });
  for (int e : order) {
    if (forced[e] || excluded[e]) continue;
    if (ds.unite(instance.edges[e].first, instance.edges[e].second)) chosen.push_back(e);
  }
  if (static_cast<int>(chosen.size()) != n - 1) return std::nullopt;
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

}  // namespace

Tree mst(const Instance& instance, const WeightVector& weights, const std::vector<int>& forced,
         const std::vector<int>& excluded) {
  if (static_cast<int>(weights.size()) != instance.num_edges()) {
    throw UsageError("mst: weight vector size mismatch");
  }
  std::vector<bool> is_forced(instance.num_edges(), false);
  std::vector<bool> is_excluded(instance.num_edges(), false);
  for (int e : forced) is_forced.at(e) = true;
  for (int e : excluded) {
    if (is_forced.at(e)) throw InfeasibleError("mst: edge " + std::to_string(e) + " both forced and excluded");
    is_excluded[e] = true;
  }
  auto edges = constrained_mst_edges(instance, weights, is_forced, is_excluded);
  if (!edges) throw InfeasibleError("mst: constraints admit no spanning tree");
  return Tree(instance, std::move(*edges));
}

KBestTreeStream::KBestTreeStream(const Instance& instance, WeightVector weights)
    : instance_(instance), weights_(std::move(weights)) {
  if (static_cast<int>(weights_.size()) != instance.num_edges()) {
    throw UsageError("KBestTreeStream: weight vector size mismatch");
  }
  push_candidate({}, {});
}

void KBestTreeStream::push_candidate(const std::vector<int>& forced,
                                     const std::vector<int>& excluded) {
  std::vector<bool> is_forced(instance_.num_edges(), false);
  std::vector<bool> is_excluded(instance_.num_edges(), false);
  for (int e : forced) is_forced[e] = true;
  for (int e : excluded) is_excluded[e] = true;
  auto edges = constrained_mst_edges(instance_, weights_, is_forced, is_excluded);
  if (!edges) return;
  Candidate cand;
  cand.edge_ids = std::move(*edges);
  cand.weight = 0.0;
  for (int e : cand.edge_ids) cand.weight += weights_[e];
  cand.forced = forced;
  cand.excluded = excluded;
  heap_.push_back(std::move(cand));
  std::push_heap(heap_.begin(), heap_.end(), [](const Candidate& a, const Candidate& b) {
    return a.weight > b.weight || (a.weight == b.weight && a.edge_ids > b.edge_ids);
  });
}

std::optional<Tree> KBestTreeStream::next() {
  if (heap_.empty()) return std::nullopt;
  const auto cmp = [](const Candidate& a, const Candidate& b) {
    return a.weight > b.weight || (a.weight == b.weight && a.edge_ids > b.edge_ids);
  };
  std::pop_heap(heap_.begin(), heap_.end(), cmp);
  Candidate top = std::move(heap_.back());
  heap_.pop_back();

  // Partition the remaining trees of this candidate's subspace: child i keeps
  // the first i free tree edges, bans the (i+1)-th. Distinctness follows from
  // the subspaces being disjoint.
  std::vector<int> forced = top.forced;
  std::vector<int> excluded = top.excluded;
  std::vector<bool> already_forced(instance_.num_edges(), false);
  for (int e : top.forced) already_forced[e] = true;
  for (int e : top.edge_ids) {
    if (already_forced[e]) continue;
    excluded.push_back(e);
    push_candidate(forced, excluded);
    excluded.pop_back();
    forced.push_back(e);
  }
  return Tree(instance_, std::move(top.edge_ids));
}

double count_spanning_trees(const Instance& instance) {
  const int n = instance.num_vertices();
  const int m = n - 1;  // Laplacian minor size
  std::vector<std::vector<double>> a(m, std::vector<double>(m, 0.0));
  for (const auto& [v, w] : instance.edges) {
    if (v < m) a[v][v] += 1.0;
    if (w < m) a[w][w] += 1.0;
    if (v < m && w < m) {
      a[v][w] -= 1.0;
      a[w][v] -= 1.0;
    }
  }
  // LU with partial pivoting.
  double det = 1.0;
  for (int col = 0; col < m; ++col) {
    int pivot = col;
    for (int r = col + 1; r < m; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    if (std::abs(a[pivot][col]) < 1e-12) return 0.0;
    if (pivot != col) {
      std::swap(a[pivot], a[col]);
      det = -det;
    }
    det *= a[col][col];
    for (int r = col + 1; r < m; ++r) {
      const double f = a[r][col] / a[col][col];
      for (int c = col; c < m; ++c) a[r][c] -= f * a[col][c];
    }
  }
  return std::round(det);
}

namespace {

struct Enumerator {
  const Instance& instance;
  const std::function<void(const Tree&)>& visit;
  std::vector<int> chosen;

  // Decide edge `e` given the partition of vertices so far.
  void recurse(int e, DisjointSets ds, int components) {
    if (components == 1) {
      visit(Tree(instance, chosen));
      return;
    }
    if (e >= instance.num_edges()) return;
    // Prune: remaining edges must be able to merge all components.
    {
      DisjointSets probe = ds;
      int c = components;
      for (int f = e; f < instance.num_edges() && c > 1; ++f) {
        if (probe.unite(instance.edges[f].first, instance.edges[f].second)) --c;
      }
      if (c > 1) return;
    }
    const auto& [v, w] = instance.edges[e];
    DisjointSets with = ds;
    if (with.unite(v, w)) {
      chosen.push_back(e);
      recurse(e + 1, std::move(with), components - 1);
      chosen.pop_back();
      recurse(e + 1, std::move(ds), components);
    } else {
      // Edge closes a cycle; it can never be part of a tree extending `chosen`.
      recurse(e + 1, std::move(ds), components);
    }
  }
};

}  // namespace

void enumerate_all(const Instance& instance, std::int64_t cap,
                   const std::function<void(const Tree&)>& visit) {
  const double count = count_spanning_trees(instance);
  if (count > static_cast<double>(cap)) {
    throw CapabilityError("enumerate_all: instance has " + std::to_string(count) +
                          " spanning trees, above cap " + std::to_string(cap));
  }
  Enumerator en{instance, visit, {}};
  en.chosen.reserve(instance.num_vertices() - 1);
  en.recurse(0, DisjointSets(instance.num_vertices()), instance.num_vertices());
}

std::vector<Tree> enumerate_all(const Instance& instance, std::int64_t cap) {
  std::vector<Tree> trees;
  enumerate_all(instance, cap, [&](const Tree& t) { trees.push_back(t); });
  return trees;
}

}  // namespace mstn
