#include "mstn/subproblem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mstn/errors.hpp"

namespace mstn {

namespace {

double dot(const std::vector<Point>& a, const std::vector<Point>& b) {
  double acc = 0.0;
  for (std::size_t v = 0; v < a.size(); ++v) {
    for (std::size_t k = 0; k < a[v].size(); ++k) acc += a[v][k] * b[v][k];
  }
  return acc;
}

double norm2_diff(const std::vector<Point>& a, const std::vector<Point>& b) {
  double acc = 0.0;
  for (std::size_t v = 0; v < a.size(); ++v) {
    for (std::size_t k = 0; k < a[v].size(); ++k) {
      const double d = a[v][k] - b[v][k];
      acc += d * d;
    }
  }
  return std::sqrt(acc);
}

// Smoothed length of one difference vector z and its gradient d(len)/dz.
double smoothed_edge_length(const Point& z, Norm norm, double mu, Point* grad) {
  const std::size_t d = z.size();
  if (grad) grad->assign(d, 0.0);
  switch (norm) {
    case Norm::L2: {
      double s2 = mu * mu;
      for (double zk : z) s2 += zk * zk;
      const double s = std::sqrt(s2);
      if (grad) {
        for (std::size_t k = 0; k < d; ++k) (*grad)[k] = z[k] / s;
      }
      return s;
    }
    case Norm::L1: {
      double total = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        const double h = std::sqrt(z[k] * z[k] + mu * mu);
        total += h;
        if (grad) (*grad)[k] = z[k] / h;
      }
      return total;
    }
    case Norm::LInf: {
      // Soft max over smoothed coordinate magnitudes, temperature mu.
      const double tau = std::max(mu, 1e-300);
      std::vector<double> h(d);
      double hmax = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        h[k] = std::sqrt(z[k] * z[k] + mu * mu);
        hmax = std::max(hmax, h[k]);
      }
      double sum = 0.0;
      for (std::size_t k = 0; k < d; ++k) sum += std::exp((h[k] - hmax) / tau);
      const double value = hmax + tau * std::log(sum);
      if (grad) {
        for (std::size_t k = 0; k < d; ++k) {
          const double wk = std::exp((h[k] - hmax) / tau) / sum;
          (*grad)[k] = wk * z[k] / h[k];
        }
      }
      return value;
    }
  }
  return 0.0;
}

struct Workspace {
  const Instance& instance;
  const std::vector<int>& tree_edges;

  double objective_smoothed(const std::vector<Point>& y, double mu,
                            std::vector<Point>* grad) const {
    if (grad) {
      grad->assign(y.size(), Point(instance.dimension, 0.0));
    }
    double total = 0.0;
    Point z(instance.dimension), g;
    for (int e : tree_edges) {
      const auto& [v, w] = instance.edges[e];
      for (int k = 0; k < instance.dimension; ++k) z[k] = y[v][k] - y[w][k];
      total += smoothed_edge_length(z, instance.norm, mu, grad ? &g : nullptr);
      if (grad) {
        for (int k = 0; k < instance.dimension; ++k) {
          (*grad)[v][k] += g[k];
          (*grad)[w][k] -= g[k];
        }
      }
    }
    return total;
  }

  double objective_exact(const std::vector<Point>& y) const {
    double total = 0.0;
    for (int e : tree_edges) {
      const auto& [v, w] = instance.edges[e];
      total += distance(y[v], y[w], instance.norm);
    }
    return total;
  }

  std::vector<Point> projected(const std::vector<Point>& y) const {
    std::vector<Point> out(y.size());
    for (std::size_t v = 0; v < y.size(); ++v) out[v] = project(y[v], instance.vertices[v]);
    return out;
  }
};

// Collapse near-coincident tree endpoints when doing so does not worsen the
// exact objective. Keeps feasibility; resolves the last few ulps at merges.
void snap_merges(const Instance& instance, const std::vector<int>& tree_edges,
                 std::vector<Point>& y, double scale) {
  const Workspace ws{instance, tree_edges};
  const double threshold = 1e-6 * scale;
  double best = ws.objective_exact(y);
  for (int e : tree_edges) {
    const auto& [v, w] = instance.edges[e];
    if (distance(y[v], y[w], Norm::L2) > threshold) continue;
    Point mid(instance.dimension);
    for (int k = 0; k < instance.dimension; ++k) mid[k] = 0.5 * (y[v][k] + y[w][k]);
    const Point q = project(project(mid, instance.vertices[v]), instance.vertices[w]);
    if (!instance.vertices[v].contains(q, 1e-12) || !instance.vertices[w].contains(q, 1e-12)) {
      continue;
    }
    const Point old_v = y[v], old_w = y[w];
    y[v] = q;
    y[w] = q;
    const double cand = ws.objective_exact(y);
    if (cand <= best + 1e-15 * (1.0 + best)) {
      best = cand;
    } else {
      y[v] = old_v;
      y[w] = old_w;
    }
  }
}

GeometricSolution run_solver(const Instance& instance, const Tree& tree, std::vector<Point> y,
                             const SubproblemOptions& opts) {
  if (opts.tolerance <= 0) throw UsageError("solve_points: tolerance must be positive");
  if (opts.smoothing_floor >= opts.smoothing_start * coordinate_scale(instance)) {
    throw UsageError("solve_points: smoothing_floor must be below smoothing_start * scale");
  }
  const Workspace ws{instance, tree.edge_ids()};
  const double scale = coordinate_scale(instance);

  for (std::size_t v = 0; v < y.size(); ++v) y[v] = project(y[v], instance.vertices[v]);

  std::vector<Point> grad, y_next, proj_step;
  int iterations = 0;
  double residual = std::numeric_limits<double>::infinity();
  bool budget_exhausted = false;

  std::vector<Point> best_y = y;
  double best_exact = ws.objective_exact(y);

  double mu = opts.smoothing_start * scale;
  bool last_level = false;
  while (!last_level) {
    if (mu <= opts.smoothing_floor) {
      mu = opts.smoothing_floor;
      last_level = true;
    }
    const double level_tol =
        last_level ? opts.tolerance * (1.0 + scale)
                   : std::max(opts.tolerance * (1.0 + scale), 1e-3 * mu);
    double f = ws.objective_smoothed(y, mu, &grad);
    double step = 1.0;
    int stalls = 0;
    while (true) {
      if (iterations >= opts.max_iterations) {
        budget_exhausted = true;
        break;
      }
      ++iterations;

      // Unit-step projected gradient mapping: zero exactly at a minimizer.
      proj_step.resize(y.size());
      for (std::size_t v = 0; v < y.size(); ++v) {
        Point moved = y[v];
        for (int k = 0; k < instance.dimension; ++k) moved[k] -= grad[v][k];
        proj_step[v] = project(moved, instance.vertices[v]);
      }
      residual = norm2_diff(y, proj_step);
      if (residual <= level_tol) break;

      // Backtracking on the proximal descent condition.
      bool accepted = false;
      for (int bt = 0; bt < 60; ++bt) {
        y_next.resize(y.size());
        for (std::size_t v = 0; v < y.size(); ++v) {
          Point moved = y[v];
          for (int k = 0; k < instance.dimension; ++k) moved[k] -= step * grad[v][k];
          y_next[v] = project(moved, instance.vertices[v]);
        }
        const double f_next = ws.objective_smoothed(y_next, mu, nullptr);
        std::vector<Point> diff(y.size());
        for (std::size_t v = 0; v < y.size(); ++v) {
          diff[v].resize(instance.dimension);
          for (int k = 0; k < instance.dimension; ++k) diff[v][k] = y_next[v][k] - y[v][k];
        }
        const double lin = dot(grad, diff);
        const double dist = norm2_diff(y_next, y);
        if (f_next <= f + lin + dist * dist / (2.0 * step) + 1e-15 * (1.0 + std::abs(f))) {
          const double f_drop = f - f_next;
          const double move = dist;
          y.swap(y_next);
          f = f_next;
          accepted = true;
          if (f_drop <= 1e-15 * (1.0 + std::abs(f)) && move <= 1e-15 * (1.0 + scale)) {
            ++stalls;
          } else {
            stalls = 0;
          }
          break;
        }
        step *= 0.5;
      }
      if (!accepted || stalls >= 3) break;
      ws.objective_smoothed(y, mu, &grad);
      step = std::min(step * 2.0, 1e6);
    }
    const double exact_now = ws.objective_exact(y);
    if (exact_now < best_exact) {
      best_exact = exact_now;
      best_y = y;
    } else if (exact_now > best_exact) {
      // Continue the next level from the best placement seen so far.
      y = best_y;
    }
    if (budget_exhausted) break;
    mu /= 10.0;
  }

  snap_merges(instance, tree.edge_ids(), y, scale);
  if (ws.objective_exact(y) <= best_exact) {
    best_y = y;
  }

  GeometricSolution sol;
  sol.points = std::move(best_y);
  sol.lengths.reserve(tree.size());
  for (int e : tree.edge_ids()) {
    const auto& [v, w] = instance.edges[e];
    sol.lengths.push_back(distance(sol.points[v], sol.points[w], instance.norm));
  }
  sol.objective = 0.0;
  for (double len : sol.lengths) sol.objective += len;
  sol.iterations = iterations;
  sol.residual = residual / (1.0 + scale);
  sol.converged = !budget_exhausted && sol.residual <= opts.tolerance;
  return sol;
}

}  // namespace

double coordinate_scale(const Instance& instance) {
  double scale = 1.0;
  for (const Neighborhood& nb : instance.vertices) {
    double c = nb.radius;
    for (double x : nb.center) c = std::max(c, std::abs(x) + nb.radius);
    scale = std::max(scale, c);
  }
  return scale;
}

GeometricSolution solve_points(const Instance& instance, const Tree& tree,
                               const SubproblemOptions& opts) {
  std::vector<Point> y;
  y.reserve(instance.num_vertices());
  for (const Neighborhood& nb : instance.vertices) y.push_back(nb.center);
  return run_solver(instance, tree, std::move(y), opts);
}

GeometricSolution solve_points_from(const Instance& instance, const Tree& tree,
                                    std::vector<Point> start, const SubproblemOptions& opts) {
  if (static_cast<int>(start.size()) != instance.num_vertices()) {
    throw UsageError("solve_points_from: starting point count mismatch");
  }
  return run_solver(instance, tree, std::move(start), opts);
}

std::pair<std::vector<double>, double> evaluate_edges(const Instance& instance,
                                                      const std::vector<int>& edge_ids,
                                                      const std::vector<Point>& points) {
  if (static_cast<int>(points.size()) != instance.num_vertices()) {
    throw UsageError("evaluate: point count mismatch");
  }
  for (int v = 0; v < instance.num_vertices(); ++v) {
    if (instance.vertices[v].membership_gap(points[v]) > 1e-6) {
      throw ValidationError("evaluate: point for vertex " +
                            std::to_string(instance.vertex_ids[v]) +
                            " lies outside its neighborhood");
    }
  }
  std::vector<double> lengths;
  lengths.reserve(edge_ids.size());
  double total = 0.0;
  for (int e : edge_ids) {
    const auto& [v, w] = instance.edges.at(e);
    lengths.push_back(distance(points[v], points[w], instance.norm));
    total += lengths.back();
  }
  return {std::move(lengths), total};
}

std::pair<std::vector<double>, double> evaluate(const Instance& instance, const Tree& tree,
                                                const std::vector<Point>& points) {
  return evaluate_edges(instance, tree.edge_ids(), points);
}

double smoothed_objective(const Instance& instance, const Tree& tree,
                          const std::vector<Point>& points, double mu) {
  const Workspace ws{instance, tree.edge_ids()};
  return ws.objective_smoothed(points, mu, nullptr);
}

std::vector<Point> smoothed_gradient(const Instance& instance, const Tree& tree,
                                     const std::vector<Point>& points, double mu) {
  const Workspace ws{instance, tree.edge_ids()};
  std::vector<Point> grad;
  ws.objective_smoothed(points, mu, &grad);
  return grad;
}

}  // namespace mstn
