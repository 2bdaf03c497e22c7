#include "mstn/oracle.hpp"

#include <chrono>
#include <limits>

#include "mstn/errors.hpp"
#include "mstn/preprocess.hpp"
#include "mstn/spanning_tree.hpp"

namespace mstn {

SolveReport solve_enumerate(const Instance& instance, const OracleOptions& opts) {
  const auto start = std::chrono::steady_clock::now();
  const auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };

  const std::vector<EdgeBounds> bounds = compute_bounds(instance);
  WeightVector center_w(instance.num_edges());
  for (int e = 0; e < instance.num_edges(); ++e) center_w[e] = instance.center_distance(e);

  SolveReport report;
  report.method = "enumerate";
  report.instance_name = instance.name;
  report.options = {{"tree_cap", std::to_string(opts.tree_cap)},
                    {"time_limit", std::to_string(opts.time_limit)}};

  // Seed the incumbent from the center-distance MST.
  Tree incumbent = mst(instance, center_w);
  GeometricSolution best_geo = solve_points(instance, incumbent, opts.subproblem);
  double ub = best_geo.objective;
  std::vector<int> best_edges = incumbent.edge_ids();
  bool hit_limit = false;
  long visited = 0;

  enumerate_all(instance, opts.tree_cap, [&](const Tree& tree) {
    ++visited;
    if (hit_limit) return;
    if ((visited & 0xFF) == 0 && elapsed() > opts.time_limit) {
      hit_limit = true;
      return;
    }
    double lower = 0.0;
    for (int e : tree.edge_ids()) lower += bounds[e].lower;
    if (lower >= ub) return;  // cannot strictly improve
    const GeometricSolution geo = solve_points(instance, tree, opts.subproblem);
    if (geo.objective < ub) {
      ub = geo.objective;
      best_edges = tree.edge_ids();
      best_geo = geo;
    }
  });

  report.objective = ub;
  report.bound = hit_limit ? 0.0 : ub;
  report.gap = relative_gap(report.objective, report.bound);
  report.status = hit_limit ? SolveStatus::TimeLimit : SolveStatus::Optimal;
  report.tree_edges = best_edges;
  report.points = best_geo.points;
  report.lengths = best_geo.lengths;
  report.iterations = visited;
  report.nodes = visited;
  report.wall_time = elapsed();
  return report;
}

}  // namespace mstn
