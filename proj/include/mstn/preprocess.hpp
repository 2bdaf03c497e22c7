#pragma once

#include <vector>

#include "mstn/geometry.hpp"
#include "mstn/instance.hpp"

namespace mstn {

// Outcome of the min/max-length edge reductions. Removed edges appear in no
// optimal tree; forced edges appear in every one. The surviving graph stays
// connected and the forced set is acyclic.
struct Reduction {
  std::vector<EdgeBounds> bounds;
  std::vector<int> removed;
  std::vector<int> forced;
};

// pair_bounds for every edge.
std::vector<EdgeBounds> compute_bounds(const Instance& instance);

// Cycle rule: e is removed when its endpoints are connected by edges whose max
// length is strictly below e's min length (every bypass edge, not just the
// cheapest cycle edge). Cut rule: e is forced when removing all edges with min
// length <= e's max length separates its endpoints. Applied to fixpoint.
Reduction reduce(const Instance& instance, std::vector<EdgeBounds> bounds);

}  // namespace mstn
