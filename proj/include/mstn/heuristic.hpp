#pragma once

#include <vector>

#include "mstn/geometry.hpp"
#include "mstn/instance.hpp"
#include "mstn/solve_report.hpp"
#include "mstn/subproblem.hpp"
#include "mstn/tree.hpp"

namespace mstn {

struct HeuristicOptions {
  long max_trees = 0;       // outer starts; 0 means 100 * |E|
  long no_improve_cap = 0;  // consecutive non-improving starts; 0 means |E|
  int inner_max_iter = 100;
  double time_limit = 3600.0;
  SubproblemOptions subproblem;
};

// Fixed point of the alternating scheme: the tree is minimal for the final
// weights and the placement is optimal for the tree.
struct PartialOptimum {
  Tree tree;
  GeometricSolution geo;
  WeightVector weights;                   // final weight vector
  int inner_iterations = 0;
  bool stopped_on_weight_tie = false;     // different tree, identical weight
  std::vector<double> objective_sequence; // placement value per inner round
};

// Alternates the weight-MST step and the placement step from T0 until two
// consecutive rounds keep the tree (or tie its weight). Weights start at the
// per-edge minimum lengths; only edges that enter a tree get updated.
PartialOptimum inner_loop(const Instance& instance, const Tree& t0,
                          const std::vector<EdgeBounds>& bounds,
                          const HeuristicOptions& opts = {});

// Multistart over the k-best center-distance trees; keeps the best partial
// optimum (ties broken by lexicographic tree). Deterministic.
SolveReport multistart(const Instance& instance, const HeuristicOptions& opts = {});

}  // namespace mstn
