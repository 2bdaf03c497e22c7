#pragma once

#include <string>
#include <utility>
#include <vector>

#include "mstn/instance.hpp"
#include "mstn/lp.hpp"

namespace mstn {

// Mixed-integer SOCP model in a solver-neutral form, serialized to the
// Conic Benchmark Format (v1 text, LINEAR/QUAD subset). Rows are affine
// expressions sum(a_j * v_j) + constant compared against 0; cones state
// rows[0] >= l2-norm(rows[1..]).
struct ExportModel {
  struct LinearRow {
    std::vector<std::pair<int, double>> terms;
    double constant = 0.0;
    RowSense sense = RowSense::GreaterEqual;  // expr >= 0 / = 0 / <= 0
  };
  struct ConeRow {
    std::vector<std::pair<int, double>> terms;
    double constant = 0.0;
  };
  struct Cone {
    std::vector<ConeRow> rows;
  };

  int num_vars = 0;
  std::vector<std::string> var_names;
  std::vector<int> integer_vars;
  std::vector<LinearRow> rows;
  std::vector<Cone> cones;
  std::vector<std::string> header_comments;

  double row_value(const LinearRow& row, const std::vector<double>& v) const;
  // Largest violation of any row/cone at the point (0 when feasible).
  double max_violation(const std::vector<double>& v) const;
};

// Variable layout (both formulations): x_e, u_e, theta_e, y_{v,k}; the
// orientation formulation appends z_a (two arcs per edge) and s_v.
ExportModel build_sec_model(const Instance& instance, int max_subset_size = 4);
ExportModel build_mtz_model(const Instance& instance);

std::string to_cbf(const ExportModel& model);

// Convenience: build + serialize. Byte-deterministic.
std::string export_sec(const Instance& instance, int max_subset_size = 4);
std::string export_mtz(const Instance& instance);

}  // namespace mstn
