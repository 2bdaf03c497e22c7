#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "mstn/instance.hpp"
#include "mstn/tree.hpp"

namespace mstn {

// Minimum-weight spanning tree containing every edge in `forced` and none in
// `excluded`. Kruskal with union-find; ties broken by smaller edge id.
// Throws InfeasibleError when no such tree exists.
Tree mst(const Instance& instance, const WeightVector& weights,
         const std::vector<int>& forced = {}, const std::vector<int>& excluded = {});

double tree_weight(const Tree& tree, const WeightVector& weights);

// Streams distinct spanning trees in nondecreasing weight, starting with the
// MST. Partition scheme over (forced, excluded) constraint sets with a global
// priority queue keyed by (weight, lexicographic edge ids); every tree is
// produced exactly once.
class KBestTreeStream {
 public:
  KBestTreeStream(const Instance& instance, WeightVector weights);

  // Next tree, or nullopt when exhausted.
  std::optional<Tree> next();

 private:
  struct Candidate {
    double weight;
    std::vector<int> edge_ids;
    std::vector<int> forced;
    std::vector<int> excluded;
  };

  const Instance& instance_;
  WeightVector weights_;
  std::vector<Candidate> heap_;  // min-heap by (weight, edge_ids)

  void push_candidate(const std::vector<int>& forced, const std::vector<int>& excluded);
};

// Number of spanning trees by the matrix-tree theorem (Laplacian minor
// determinant), rounded to the nearest integer.
double count_spanning_trees(const Instance& instance);

// Visits every spanning tree exactly once (include/exclude recursion with
// connectivity pruning). Refuses instances with more than `cap` trees.
void enumerate_all(const Instance& instance, std::int64_t cap,
                   const std::function<void(const Tree&)>& visit);

std::vector<Tree> enumerate_all(const Instance& instance, std::int64_t cap = 10'000'000);

}  // namespace mstn
