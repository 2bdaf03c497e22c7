#pragma once

#include <string>
#include <vector>

namespace mstn {

enum class RowSense { LessEqual, Equal, GreaterEqual };

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> x;       // structural variable values (Optimal only)
  double objective = 0.0;
};

// Dense LP: min c'x subject to row constraints and variable bounds, solved by
// a bounded-variable primal simplex (composite phase 1, Dantzig pricing with
// Bland's rule after stalls). Re-solves warm-start from the previous basis
// when it is still structurally valid. Deterministic.
class LpModel {
 public:
  // +/- infinity bounds are allowed (use +/-std::numeric_limits<double>::infinity()).
  int add_variable(double lo, double hi, double objective);
  void set_variable_bounds(int var, double lo, double hi);
  void set_objective(int var, double coeff);

  // coeffs may be shorter than the variable count; missing entries are 0.
  int add_row(std::vector<double> coeffs, RowSense sense, double rhs);
  void remove_row(int row);  // positional; later rows shift down

  int num_variables() const { return static_cast<int>(vars_.size()); }
  int num_rows() const { return static_cast<int>(rows_.size()); }

  LpResult solve();

  // Plain-text tableau: one line per variable (bounds, cost) and per row
  // (coefficients, sense, rhs). For debugging.
  std::string dump() const;

 private:
  struct Variable {
    double lo, hi, obj;
  };
  struct Row {
    std::vector<double> coeffs;  // structural part, dense
    RowSense sense;
    double rhs;
  };

  enum class ColState : unsigned char { Basic, AtLower, AtUpper, FreeZero };

  std::vector<Variable> vars_;
  std::vector<Row> rows_;

  // Solver state (columns = structurals then one slack per row).
  bool basis_valid_ = false;
  std::vector<int> basis_;            // column basic in each row
  std::vector<ColState> state_;       // per column

  int num_cols() const { return num_variables() + num_rows(); }
  double col_lo(int j) const;
  double col_hi(int j) const;
  double col_obj(int j) const;
  double col_entry(int row, int j) const;  // A[row][j] including slack part

  void reset_basis();
  bool factorize(std::vector<std::vector<double>>& binv) const;

  friend class SimplexRun;
};

LpResult solve_lp(LpModel& model);

}  // namespace mstn
