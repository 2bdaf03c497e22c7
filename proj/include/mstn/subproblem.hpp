#pragma once

#include <utility>
#include <vector>

#include "mstn/instance.hpp"
#include "mstn/tree.hpp"

namespace mstn {

// Optimal (or best-found) placement of the vertices for a fixed tree.
struct GeometricSolution {
  std::vector<Point> points;     // y_v, one per vertex, feasible
  std::vector<double> lengths;   // per tree edge, parallel to tree.edge_ids()
  double objective = 0.0;        // sum of lengths (exact re-evaluation)
  double residual = 0.0;         // scaled projected-gradient residual at the floor level
  int iterations = 0;
  bool converged = false;
};

struct SubproblemOptions {
  double tolerance = 1e-8;       // on the scaled projected-gradient norm
  int max_iterations = 50000;    // across all smoothing levels
  double smoothing_start = 1e-2; // times the coordinate scale
  double smoothing_floor = 1e-9; // absolute
};

// Minimizes the total length of the tree edges over feasible placements: a
// convex problem, solved by projected gradient descent with backtracking on
// the smoothed objective and continuation mu -> mu/10. Deterministic,
// initialized at the neighborhood centers.
GeometricSolution solve_points(const Instance& instance, const Tree& tree,
                               const SubproblemOptions& opts = {});

// Same solver from an explicit starting placement (points are projected into
// their neighborhoods first). Used by restart-agreement checks.
GeometricSolution solve_points_from(const Instance& instance, const Tree& tree,
                                    std::vector<Point> start, const SubproblemOptions& opts = {});

// Recomputes per-edge lengths and the total for feasible points (membership
// within 1e-6, else ValidationError naming the vertex). Pure.
std::pair<std::vector<double>, double> evaluate(const Instance& instance, const Tree& tree,
                                                const std::vector<Point>& points);
std::pair<std::vector<double>, double> evaluate_edges(const Instance& instance,
                                                      const std::vector<int>& edge_ids,
                                                      const std::vector<Point>& points);

// Smoothed surrogate of the tree-length objective and its gradient. Exposed
// for finite-difference checks.
double smoothed_objective(const Instance& instance, const Tree& tree,
                          const std::vector<Point>& points, double mu);
std::vector<Point> smoothed_gradient(const Instance& instance, const Tree& tree,
                                     const std::vector<Point>& points, double mu);

// max_v (||center_v||_inf + radius_v), floored at 1. Sets the smoothing and
// residual scales.
double coordinate_scale(const Instance& instance);

}  // namespace mstn
