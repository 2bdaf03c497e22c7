#include "mstn/solve_report.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "mstn/errors.hpp"
#include "mstn/tree.hpp"

#ifndef MSTN_GIT_REVISION
#define MSTN_GIT_REVISION "unknown"
#endif

namespace mstn {

using json = nlohmann::json;

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "Optimal";
    case SolveStatus::TimeLimit: return "TimeLimit";
    case SolveStatus::GapLimit: return "GapLimit";
  }
  return "Optimal";
}

double relative_gap(double ub, double lb) {
  if (!(ub > 1e-12)) return 0.0;
  return std::max(0.0, (ub - lb) / ub);
}

std::string report_to_json(const SolveReport& report) {
  json doc;
  doc["method"] = report.method;
  doc["instance"] = report.instance_name;
  doc["status"] = to_string(report.status);
  doc["objective"] = report.objective;
  doc["lb"] = report.bound;
  doc["ub"] = report.objective;
  doc["gap_pct"] = 100.0 * report.gap;
  doc["gap0_pct"] = 100.0 * report.gap0;
  doc["cpu_s"] = report.wall_time;
  doc["nodes"] = report.nodes;
  doc["sec_cuts"] = report.sec_cuts;
  doc["benders_cuts"] = report.benders_cuts;
  doc["iterations"] = report.iterations;
  if (report.starts > 0) {
    doc["starts"] = report.starts;
    doc["inner_iterations_total"] = report.inner_iterations_total;
  }
  doc["tree_edges"] = report.tree_edges;
  json pts = json::array();
  for (const Point& p : report.points) pts.push_back(p);
  doc["points"] = std::move(pts);
  doc["lengths"] = report.lengths;
  if (!report.trace.empty()) {
    json tr = json::array();
    for (const auto& t : report.trace) {
      tr.push_back(json{{"start", t.start_index},
                        {"inner_iterations", t.inner_iterations},
                        {"objective", t.objective}});
    }
    doc["trace"] = std::move(tr);
  }
  json opts = json::object();
  for (const auto& [k, v] : report.options) opts[k] = v;
  doc["options"] = std::move(opts);
  doc["git_revision"] = MSTN_GIT_REVISION;
  return doc.dump(2) + "\n";
}

void validate_report(const Instance& instance, const SolveReport& report) {
  const Tree tree(instance, report.tree_edges);  // throws when not spanning
  const auto [lengths, total] = evaluate(instance, tree, report.points);
  if (std::abs(total - report.objective) > 1e-9 * (1.0 + std::abs(total))) {
    throw ValidationError("report: objective " + std::to_string(report.objective) +
                          " inconsistent with recomputed " + std::to_string(total));
  }
  if (report.bound > report.objective + 1e-6 * (1.0 + std::abs(report.objective))) {
    throw ValidationError("report: lower bound exceeds objective");
  }
}

}  // namespace mstn
