#include "mstn/heuristic.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "mstn/errors.hpp"
#include "mstn/preprocess.hpp"
#include "mstn/spanning_tree.hpp"

namespace mstn {

namespace {
using Clock = std::chrono::steady_clock;
}

PartialOptimum inner_loop(const Instance& instance, const Tree& t0,
                          const std::vector<EdgeBounds>& bounds, const HeuristicOptions& opts) {
  if (static_cast<int>(bounds.size()) != instance.num_edges()) {
    throw UsageError("inner_loop: bounds size mismatch");
  }
  WeightVector weights(instance.num_edges());
  for (int e = 0; e < instance.num_edges(); ++e) weights[e] = bounds[e].lower;

  Tree tree = t0;
  GeometricSolution geo = solve_points(instance, tree, opts.subproblem);
  std::vector<double> sequence = {geo.objective};
  bool tie_stop = false;
  int rounds = 0;

  while (rounds < opts.inner_max_iter) {
    // Tree edges take their realized lengths; the rest keep their old values.
    const auto& ids = tree.edge_ids();
    for (std::size_t i = 0; i < ids.size(); ++i) weights[ids[i]] = geo.lengths[i];

    Tree candidate = mst(instance, weights);
    if (candidate == tree) break;
    const double w_candidate = tree_weight(candidate, weights);
    const double w_current = tree_weight(tree, weights);
    if (std::abs(w_candidate - w_current) <= 1e-12 * (1.0 + std::abs(w_current))) {
      tie_stop = true;  // equal-weight alternative; stopping avoids 2-cycles
      break;
    }
    ++rounds;
    geo = solve_points(instance, candidate, opts.subproblem);
    tree = std::move(candidate);
    sequence.push_back(geo.objective);
  }

  PartialOptimum result{std::move(tree), std::move(geo), std::move(weights),
                        rounds, tie_stop, std::move(sequence)};
  return result;
}

SolveReport multistart(const Instance& instance, const HeuristicOptions& opts) {
  const auto start_time = Clock::now();
  const auto elapsed = [&] {
    return std::chrono::duration<double>(Clock::now() - start_time).count();
  };

  const long max_trees = opts.max_trees > 0 ? opts.max_trees : 100L * instance.num_edges();
  const long no_improve_cap =
      opts.no_improve_cap > 0 ? opts.no_improve_cap : static_cast<long>(instance.num_edges());

  const std::vector<EdgeBounds> bounds = compute_bounds(instance);
  WeightVector center_w(instance.num_edges());
  WeightVector min_w(instance.num_edges());
  for (int e = 0; e < instance.num_edges(); ++e) {
    center_w[e] = instance.center_distance(e);
    min_w[e] = bounds[e].lower;
  }

  SolveReport report;
  report.method = "heuristic";
  report.instance_name = instance.name;
  report.options = {{"max_trees", std::to_string(max_trees)},
                    {"no_improve_cap", std::to_string(no_improve_cap)},
                    {"inner_max_iter", std::to_string(opts.inner_max_iter)},
                    {"time_limit", std::to_string(opts.time_limit)}};
  report.bound = tree_weight(mst(instance, min_w), min_w);

  const Tree center_tree = mst(instance, center_w);

  KBestTreeStream stream(instance, center_w);
  double best_obj = std::numeric_limits<double>::infinity();
  std::vector<int> best_tree;
  GeometricSolution best_geo;
  long starts = 0;
  long no_improve = 0;
  bool hit_time = false;

  while (starts < max_trees) {
    const auto t0 = stream.next();
    if (!t0) break;
    PartialOptimum po = inner_loop(instance, *t0, bounds, opts);
    ++starts;
    report.inner_iterations_total += po.inner_iterations;
    report.trace.push_back(
        {static_cast<int>(starts - 1), po.inner_iterations, po.geo.objective});
    for (std::size_t k = 1; k < po.objective_sequence.size(); ++k) {
      if (po.objective_sequence[k] > po.objective_sequence[k - 1] + 1e-9) {
        ++report.monotone_violations;
      }
    }
    if (starts == 1) report.mst_upper = po.objective_sequence.front();

    const bool improves = po.geo.objective < best_obj - 1e-9;
    if (po.geo.objective < best_obj - 1e-12) {
      best_obj = po.geo.objective;
      best_tree = po.tree.edge_ids();
      best_geo = std::move(po.geo);
    } else if (std::abs(po.geo.objective - best_obj) <= 1e-12 * (1.0 + best_obj) &&
               !best_tree.empty() && po.tree.edge_ids() < best_tree) {
      best_tree = po.tree.edge_ids();
      best_geo = std::move(po.geo);
    }
    no_improve = improves ? 0 : no_improve + 1;
    if (no_improve >= no_improve_cap) break;
    if (elapsed() > opts.time_limit) {
      hit_time = true;
      break;
    }
  }

  report.starts = starts;
  report.iterations = starts;
  report.objective = best_obj;
  report.gap = relative_gap(report.objective, report.bound);
  report.status = hit_time ? SolveStatus::TimeLimit
                           : (report.gap <= 1e-9 ? SolveStatus::Optimal : SolveStatus::GapLimit);
  report.tree_edges = best_tree;
  report.points = best_geo.points;
  report.lengths = best_geo.lengths;
  report.matches_center_mst = best_tree == center_tree.edge_ids();
  report.wall_time = elapsed();
  return report;
}

}  // namespace mstn
