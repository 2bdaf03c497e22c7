#pragma once

#include <string>
#include <utility>
#include <vector>

#include "mstn/instance.hpp"
#include "mstn/subproblem.hpp"

namespace mstn {

enum class SolveStatus { Optimal, TimeLimit, GapLimit };

std::string to_string(SolveStatus s);

// Uniform result of every solve method. objective/bound are the incumbent
// upper/lower bounds; counters mirror the benchmark table columns.
struct SolveReport {
  std::string method;
  std::string instance_name;
  SolveStatus status = SolveStatus::Optimal;

  double objective = 0.0;  // UB
  double bound = 0.0;      // LB
  double gap = 0.0;        // (UB - LB) / UB, 0 for UB ~ 0
  double gap0 = 0.0;       // root gap, exact methods only

  std::vector<int> tree_edges;
  std::vector<Point> points;
  std::vector<double> lengths;

  long nodes = 0;
  long sec_cuts = 0;
  long benders_cuts = 0;
  long iterations = 0;  // outer iterations (decomposition rounds / starts)
  long starts = 0;
  long inner_iterations_total = 0;
  double wall_time = 0.0;

  struct StartTrace {
    int start_index = 0;
    int inner_iterations = 0;
    double objective = 0.0;
  };
  std::vector<StartTrace> trace;  // heuristic only

  // Heuristic extras: the placement value of the center-distance MST (the
  // reference upper bound), whether the final tree equals that MST, and how
  // many inner rounds increased the objective (expected 0).
  double mst_upper = 0.0;
  bool matches_center_mst = false;
  long monotone_violations = 0;

  std::vector<std::pair<std::string, std::string>> options;
};

double relative_gap(double ub, double lb);

// JSON document for a report (includes the git revision and option set).
std::string report_to_json(const SolveReport& report);

// Re-validates a report against its instance: spanning tree, feasible points,
// objective consistent with evaluate() within 1e-9. Throws ValidationError.
void validate_report(const Instance& instance, const SolveReport& report);

}  // namespace mstn
