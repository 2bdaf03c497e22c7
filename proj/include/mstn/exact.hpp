#pragma once

#include <vector>

#include "mstn/geometry.hpp"
#include "mstn/instance.hpp"
#include "mstn/preprocess.hpp"
#include "mstn/solve_report.hpp"
#include "mstn/subproblem.hpp"
#include "mstn/tree.hpp"

namespace mstn {

// Optimality cut derived from the fixed-tree subproblem value: for any tree x,
//   sum_e theta_e >= value + sum_{e in tree} U_e (x_e - 1) + sum_{e not in tree} u_e x_e
// with U/u the per-edge max/min length bounds.
struct BendersCut {
  std::vector<int> tree_edges;  // source tree
  double value = 0.0;           // subproblem optimum u(x) at the source tree

  double rhs_at(const std::vector<double>& x, const std::vector<EdgeBounds>& bounds) const;
};

// pre: geo solved on tree. Evaluating the cut at its own tree gives exactly geo.objective.
BendersCut make_cut(const Tree& tree, const GeometricSolution& geo);

// Violated subtour-elimination sets for a point with 0 <= x <= 1 and
// sum x ~= |V|-1. Integral points are handled by connected components;
// fractional points by per-vertex forced min-cuts on the standard auxiliary
// network. Exact: returns empty iff no violated set exists.
std::vector<std::vector<int>> separate_sec(const Instance& instance,
                                           const std::vector<double>& x,
                                           double violation_tol = 1e-6);

struct ExactOptions {
  double eps = 1e-6;          // absolute |UB-LB| target
  long max_iterations = 100000;
  double time_limit = 60.0;   // seconds
  SubproblemOptions subproblem;
};

// Decomposition loop: subproblem -> cut -> master to integer optimality.
SolveReport solve_iterative(const Instance& instance, const ExactOptions& opts = {});

// Best-first branch-and-cut with lazy SEC and Benders separation.
SolveReport solve_branch_and_cut(const Instance& instance, const ExactOptions& opts = {});

}  // namespace mstn
