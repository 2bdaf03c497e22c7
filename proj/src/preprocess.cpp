#include "mstn/preprocess.hpp"

#include <algorithm>
#include <cassert>

#include "mstn/errors.hpp"
#include "mstn/tree.hpp"

namespace mstn {

std::vector<EdgeBounds> compute_bounds(const Instance& instance) {
  std::vector<EdgeBounds> bounds;
  bounds.reserve(instance.num_edges());
  for (const auto& [v, w] : instance.edges) {
    bounds.push_back(pair_bounds(instance.vertices[v], instance.vertices[w], instance.norm));
  }
  return bounds;
}

namespace {

bool connected_in_subset(const Instance& instance, const std::vector<bool>& keep, int v, int w) {
  DisjointSets ds(instance.num_vertices());
  for (int e = 0; e < instance.num_edges(); ++e) {
    if (keep[e]) ds.unite(instance.edges[e].first, instance.edges[e].second);
  }
  return ds.find(v) == ds.find(w);
}

}  // namespace

Reduction reduce(const Instance& instance, std::vector<EdgeBounds> bounds) {
  const int m = instance.num_edges();
  if (static_cast<int>(bounds.size()) != m) throw UsageError("reduce: bounds size mismatch");

  std::vector<bool> removed(m, false);
  std::vector<bool> forced(m, false);
  std::vector<bool> keep(m);

  bool changed = true;
  while (changed) {
    changed = false;

    // Cycle rule: a strictly cheaper bypass path makes e useless. Strict
    // inequality, so ties never remove.
    for (int e = 0; e < m; ++e) {
      if (removed[e] || forced[e]) continue;
      for (int f = 0; f < m; ++f) keep[f] = f != e && bounds[f].upper < bounds[e].lower;
      if (connected_in_subset(instance, keep, instance.edges[e].first, instance.edges[e].second)) {
        removed[e] = true;
        changed = true;
      }
    }

    // Cut rule: if deleting every edge that could be as short as e's max
    // length separates e's endpoints, then e is the unique cheapest crossing
    // edge of that cut.
    for (int e = 0; e < m; ++e) {
      if (forced[e] || removed[e]) continue;
      for (int f = 0; f < m; ++f) keep[f] = f != e && bounds[f].lower <= bounds[e].upper;
      if (!connected_in_subset(instance, keep, instance.edges[e].first,
                               instance.edges[e].second)) {
        forced[e] = true;
        changed = true;
      }
    }
  }

  Reduction red;
  red.bounds = std::move(bounds);
  for (int e = 0; e < m; ++e) {
    if (removed[e]) red.removed.push_back(e);
    if (forced[e]) red.forced.push_back(e);
  }

  // Soundness checks: survivors stay connected, forced edges are acyclic.
  {
    for (int e = 0; e < m; ++e) keep[e] = !removed[e];
    DisjointSets ds(instance.num_vertices());
    int components = instance.num_vertices();
    for (int e = 0; e < m; ++e) {
      if (keep[e] && ds.unite(instance.edges[e].first, instance.edges[e].second)) --components;
    }
    assert(components == 1);
    DisjointSets fs(instance.num_vertices());
    for (int e : red.forced) {
      const bool ok = fs.unite(instance.edges[e].first, instance.edges[e].second);
      assert(ok);
      (void)ok;
    }
    (void)components;
  }
  return red;
}

}  // namespace mstn
