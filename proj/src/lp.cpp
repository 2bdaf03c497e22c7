#include "mstn/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mstn/errors.hpp"

namespace mstn {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kFeasTol = 1e-9;
constexpr double kCostTol = 1e-9;
constexpr double kPivotTol = 1e-9;
constexpr int kStallLimit = 500;
constexpr int kRefactorEvery = 64;
}  // namespace

int LpModel::add_variable(double lo, double hi, double objective) {
  if (lo > hi) throw UsageError("LpModel: variable lower bound above upper bound");
  vars_.push_back({lo, hi, objective});
  basis_valid_ = false;  // slack column ids shift
  return static_cast<int>(vars_.size()) - 1;
}

void LpModel::set_variable_bounds(int var, double lo, double hi) {
  if (var < 0 || var >= num_variables()) throw UsageError("LpModel: variable index out of range");
  if (lo > hi) throw UsageError("LpModel: variable lower bound above upper bound");
  vars_[var].lo = lo;
  vars_[var].hi = hi;
  // Basis stays structurally valid; values are recomputed on solve.
}

void LpModel::set_objective(int var, double coeff) {
  if (var < 0 || var >= num_variables()) throw UsageError("LpModel: variable index out of range");
  vars_[var].obj = coeff;
}

int LpModel::add_row(std::vector<double> coeffs, RowSense sense, double rhs) {
  if (static_cast<int>(coeffs.size()) > num_variables()) {
    throw UsageError("LpModel: row has more coefficients than variables");
  }
  coeffs.resize(num_variables(), 0.0);
  const int new_row = num_rows();
  rows_.push_back({std::move(coeffs), sense, rhs});
  if (basis_valid_) {
    // Keep the old basis and make the new row's slack basic.
    basis_.push_back(num_variables() + new_row);
    state_.push_back(ColState::Basic);
  }
  return new_row;
}

void LpModel::remove_row(int row) {
  if (row < 0 || row >= num_rows()) throw UsageError("LpModel: row index out of range");
  rows_.erase(rows_.begin() + row);
  basis_valid_ = false;  // slack ids shift; cold start next solve
}

double LpModel::col_lo(int j) const {
  if (j < num_variables()) return vars_[j].lo;
  switch (rows_[j - num_variables()].sense) {
    case RowSense::LessEqual: return 0.0;
    case RowSense::Equal: return 0.0;
    case RowSense::GreaterEqual: return -kInf;
  }
  return 0.0;
}

double LpModel::col_hi(int j) const {
  if (j < num_variables()) return vars_[j].hi;
  switch (rows_[j - num_variables()].sense) {
    case RowSense::LessEqual: return kInf;
    case RowSense::Equal: return 0.0;
    case RowSense::GreaterEqual: return 0.0;
  }
  return 0.0;
}

double LpModel::col_obj(int j) const { return j < num_variables() ? vars_[j].obj : 0.0; }

double LpModel::col_entry(int row, int j) const {
  if (j < num_variables()) return rows_[row].coeffs[j];
  return j - num_variables() == row ? 1.0 : 0.0;
}

void LpModel::reset_basis() {
  basis_.resize(num_rows());
  state_.assign(num_cols(), ColState::AtLower);
  for (int j = 0; j < num_variables(); ++j) {
    if (std::isfinite(vars_[j].lo)) {
      state_[j] = ColState::AtLower;
    } else if (std::isfinite(vars_[j].hi)) {
      state_[j] = ColState::AtUpper;
    } else {
      state_[j] = ColState::FreeZero;
    }
  }
  for (int i = 0; i < num_rows(); ++i) {
    basis_[i] = num_variables() + i;
    state_[num_variables() + i] = ColState::Basic;
  }
  basis_valid_ = true;
}

bool LpModel::factorize(std::vector<std::vector<double>>& binv) const {
  const int m = num_rows();
  // Gauss-Jordan inversion of the basis matrix with partial pivoting.
  std::vector<std::vector<double>> a(m, std::vector<double>(2 * m, 0.0));
  for (int i = 0; i < m; ++i) {
    for (int r = 0; r < m; ++r) a[r][i] = col_entry(r, basis_[i]);
    a[i][m + i] = 1.0;
  }
  for (int col = 0; col < m; ++col) {
    int pivot = col;
    for (int r = col + 1; r < m; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    if (std::abs(a[pivot][col]) < 1e-11) return false;
    std::swap(a[pivot], a[col]);
    const double inv = 1.0 / a[col][col];
    for (int c = 0; c < 2 * m; ++c) a[col][c] *= inv;
    for (int r = 0; r < m; ++r) {
      if (r == col) continue;
      const double f = a[r][col];
      if (f == 0.0) continue;
      for (int c = 0; c < 2 * m; ++c) a[r][c] -= f * a[col][c];
    }
  }
  binv.assign(m, std::vector<double>(m));
  for (int r = 0; r < m; ++r) {
    for (int c = 0; c < m; ++c) binv[r][c] = a[r][m + c];
  }
  return true;
}

// One simplex solve over a fixed model structure.
class SimplexRun {
 public:
  explicit SimplexRun(LpModel& model) : m_(model), nrows_(model.num_rows()), ncols_(model.num_cols()) {}

  LpResult run() {
    if (!m_.basis_valid_) m_.reset_basis();
    if (!refactorize()) {
      m_.reset_basis();
      if (!refactorize()) throw SolverError("LpModel: singular all-slack basis");
    }
    compute_values();

    if (!phase1()) {
      LpResult res;
      res.status = LpStatus::Infeasible;
      return res;
    }
    const LpStatus status = phase2();
    LpResult res;
    res.status = status;
    if (status == LpStatus::Optimal) {
      res.x.resize(m_.num_variables());
      for (int j = 0; j < m_.num_variables(); ++j) res.x[j] = value_[j];
      res.objective = 0.0;
      for (int j = 0; j < m_.num_variables(); ++j) res.objective += m_.vars_[j].obj * res.x[j];
      verify(res);
    }
    return res;
  }

 private:
  LpModel& m_;
  int nrows_;
  int ncols_;
  std::vector<std::vector<double>> binv_;
  std::vector<double> value_;  // all columns
  int pivots_since_refactor_ = 0;
  bool bland_ = false;
  int stall_ = 0;

  bool refactorize() {
    pivots_since_refactor_ = 0;
    return m_.factorize(binv_);
  }

  // Nonbasic values from states, basic values from B^-1 (b - N x_N).
  void compute_values() {
    value_.assign(ncols_, 0.0);
    for (int j = 0; j < ncols_; ++j) {
      if (m_.state_[j] == LpModel::ColState::AtLower) {
        value_[j] = m_.col_lo(j);
      } else if (m_.state_[j] == LpModel::ColState::AtUpper) {
        value_[j] = m_.col_hi(j);
      } else {
        value_[j] = 0.0;
      }
      if (!std::isfinite(value_[j])) value_[j] = 0.0;
    }
    std::vector<double> rhs(nrows_);
    for (int r = 0; r < nrows_; ++r) {
      double acc = m_.rows_[r].rhs;
      for (int j = 0; j < ncols_; ++j) {
        if (m_.state_[j] != LpModel::ColState::Basic && value_[j] != 0.0) {
          acc -= m_.col_entry(r, j) * value_[j];
        }
      }
      rhs[r] = acc;
    }
    for (int i = 0; i < nrows_; ++i) {
      double acc = 0.0;
      for (int r = 0; r < nrows_; ++r) acc += binv_[i][r] * rhs[r];
      value_[m_.basis_[i]] = acc;
    }
  }

  std::vector<double> btran(const std::vector<double>& c_b) const {
    std::vector<double> y(nrows_, 0.0);
    for (int r = 0; r < nrows_; ++r) {
      double acc = 0.0;
      for (int i = 0; i < nrows_; ++i) acc += c_b[i] * binv_[i][r];
      y[r] = acc;
    }
    return y;
  }

  std::vector<double> ftran(int col) const {
    std::vector<double> a(nrows_, 0.0);
    for (int i = 0; i < nrows_; ++i) {
      double acc = 0.0;
      for (int r = 0; r < nrows_; ++r) acc += binv_[i][r] * m_.col_entry(r, col);
      a[i] = acc;
    }
    return a;
  }

  double dot_col(const std::vector<double>& y, int col) const {
    double acc = 0.0;
    for (int r = 0; r < nrows_; ++r) {
      if (y[r] != 0.0) acc += y[r] * m_.col_entry(r, col);
    }
    return acc;
  }

  double infeasibility() const {
    double total = 0.0;
    for (int i = 0; i < nrows_; ++i) {
      const int j = m_.basis_[i];
      total += std::max(0.0, m_.col_lo(j) - value_[j]);
      total += std::max(0.0, value_[j] - m_.col_hi(j));
    }
    return total;
  }

  void pivot(int entering, int leaving_row, const std::vector<double>& alpha,
             LpModel::ColState leaving_state) {
    const int leaving = m_.basis_[leaving_row];
    m_.basis_[leaving_row] = entering;
    m_.state_[entering] = LpModel::ColState::Basic;
    m_.state_[leaving] = leaving_state;
    const double piv = alpha[leaving_row];
    const double inv = 1.0 / piv;
    for (int c = 0; c < nrows_; ++c) binv_[leaving_row][c] *= inv;
    for (int i = 0; i < nrows_; ++i) {
      if (i == leaving_row) continue;
      const double f = alpha[i];
      if (f == 0.0) continue;
      for (int c = 0; c < nrows_; ++c) binv_[i][c] -= f * binv_[leaving_row][c];
    }
    if (++pivots_since_refactor_ >= kRefactorEvery) {
      if (!refactorize()) throw SolverError("LpModel: basis became singular");
    }
  }

  // Shared iteration core. phase1 uses violation costs; phase2 the objective.
  // Returns Optimal / Unbounded (phase2), or Optimal when no entering column.
  template <bool Phase1>
  LpStatus iterate() {
    int iterations_cap = 20000 + 200 * (nrows_ + ncols_);
    stall_ = 0;
    bland_ = false;
    double last_metric = Phase1 ? infeasibility() : current_objective();
    while (iterations_cap-- > 0) {
      // Cost vector over basics.
      std::vector<double> c_b(nrows_);
      bool any_violation = false;
      for (int i = 0; i < nrows_; ++i) {
        const int j = m_.basis_[i];
        if constexpr (Phase1) {
          if (value_[j] < m_.col_lo(j) - kFeasTol) {
            c_b[i] = -1.0;
            any_violation = true;
          } else if (value_[j] > m_.col_hi(j) + kFeasTol) {
            c_b[i] = 1.0;
            any_violation = true;
          } else {
            c_b[i] = 0.0;
          }
        } else {
          c_b[i] = m_.col_obj(j);
        }
      }
      if (Phase1 && !any_violation) return LpStatus::Optimal;

      const std::vector<double> y = btran(c_b);

      // Entering column.
      int entering = -1;
      double best_score = bland_ ? 0.0 : kCostTol;
      bool increase = true;
      for (int j = 0; j < ncols_; ++j) {
        if (m_.state_[j] == LpModel::ColState::Basic) continue;
        const double cj = Phase1 ? 0.0 : m_.col_obj(j);
        const double d = cj - dot_col(y, j);
        const LpModel::ColState st = m_.state_[j];
        bool ok = false;
        bool up = true;
        if (st == LpModel::ColState::AtLower || st == LpModel::ColState::FreeZero) {
          if (d < -kCostTol) {
            ok = true;
            up = true;
          }
        }
        if (!ok && (st == LpModel::ColState::AtUpper || st == LpModel::ColState::FreeZero)) {
          if (d > kCostTol) {
            ok = true;
            up = false;
          }
        }
        if (!ok) continue;
        if (bland_) {
          entering = j;
          increase = up;
          break;
        }
        if (std::abs(d) > best_score) {
          best_score = std::abs(d);
          entering = j;
          increase = up;
        }
      }
      if (entering < 0) {
        if constexpr (Phase1) {
          return infeasibility() <= kFeasTol * (1.0 + nrows_) ? LpStatus::Optimal
                                                              : LpStatus::Infeasible;
        }
        return LpStatus::Optimal;
      }

      const std::vector<double> alpha = ftran(entering);
      const double sigma = increase ? 1.0 : -1.0;

      // Ratio test: first blocking breakpoint. Basic i moves at rate
      // -sigma*alpha_i. In phase 1, a violated basic reaching its violated
      // bound blocks there (it turns feasible and leaves the basis).
      double best_t = kInf;
      int leaving_row = -1;
      LpModel::ColState leaving_state = LpModel::ColState::AtLower;
      for (int i = 0; i < nrows_; ++i) {
        const double rate = -sigma * alpha[i];
        if (std::abs(rate) < kPivotTol) continue;
        const int j = m_.basis_[i];
        const double lo = m_.col_lo(j);
        const double hi = m_.col_hi(j);
        const double v = value_[j];
        double t = kInf;
        LpModel::ColState target = LpModel::ColState::AtLower;
        if constexpr (Phase1) {
          if (v < lo - kFeasTol) {
            if (rate > 0.0) {
              t = (lo - v) / rate;
              target = LpModel::ColState::AtLower;
            }
          } else if (v > hi + kFeasTol) {
            if (rate < 0.0) {
              t = (hi - v) / rate;
              target = LpModel::ColState::AtUpper;
            }
          } else {
            if (rate > 0.0 && std::isfinite(hi)) {
              t = (hi - v) / rate;
              target = LpModel::ColState::AtUpper;
            } else if (rate < 0.0 && std::isfinite(lo)) {
              t = (lo - v) / rate;
              target = LpModel::ColState::AtLower;
            }
          }
        } else {
          if (rate > 0.0 && std::isfinite(hi)) {
            t = (hi - v) / rate;
            target = LpModel::ColState::AtUpper;
          } else if (rate < 0.0 && std::isfinite(lo)) {
            t = (lo - v) / rate;
            target = LpModel::ColState::AtLower;
          }
        }
        if (t == kInf) continue;
        t = std::max(t, 0.0);
        if (t < best_t - 1e-12 ||
            (t < best_t + 1e-12 &&
             (leaving_row < 0 || (bland_ ? j < m_.basis_[leaving_row]
                                         : std::abs(alpha[i]) >
                                               std::abs(alpha[leaving_row]))))) {
          best_t = t;
          leaving_row = i;
          leaving_state = target;
        }
      }

      // Entering variable's own bound range.
      double flip_t = kInf;
      if (m_.state_[entering] != LpModel::ColState::FreeZero) {
        const double range = m_.col_hi(entering) - m_.col_lo(entering);
        if (std::isfinite(range)) flip_t = range;
      }

      if (flip_t == kInf && leaving_row < 0) {
        if constexpr (Phase1) {
          throw SolverError("LpModel: phase-1 ray without breakpoint");
        }
        return LpStatus::Unbounded;
      }

      if (flip_t <= best_t) {
        // Bound flip: no basis change.
        m_.state_[entering] = increase ? LpModel::ColState::AtUpper : LpModel::ColState::AtLower;
      } else {
        pivot(entering, leaving_row, alpha, leaving_state);
      }
      compute_values();

      const double metric = Phase1 ? infeasibility() : current_objective();
      if (metric < last_metric - 1e-12) {
        stall_ = 0;
      } else if (++stall_ >= kStallLimit) {
        bland_ = true;
      }
      last_metric = metric;
    }
    throw SolverError("LpModel: simplex iteration cap exceeded");
  }

  double current_objective() const {
    double acc = 0.0;
    for (int j = 0; j < m_.num_variables(); ++j) acc += m_.vars_[j].obj * value_[j];
    return acc;
  }

  bool phase1() {
    if (infeasibility() <= kFeasTol * (1.0 + nrows_)) return true;
    return iterate<true>() == LpStatus::Optimal;
  }

  LpStatus phase2() { return iterate<false>(); }

  void verify(const LpResult& res) const {
    for (int r = 0; r < nrows_; ++r) {
      double act = 0.0;
      for (int j = 0; j < m_.num_variables(); ++j) act += m_.rows_[r].coeffs[j] * res.x[j];
      const double rhs = m_.rows_[r].rhs;
      const double tol = 1e-7 * (1.0 + std::abs(rhs));
      switch (m_.rows_[r].sense) {
        case RowSense::LessEqual:
          if (act > rhs + tol) throw SolverError("LpModel: optimal point violates a <= row");
          break;
        case RowSense::GreaterEqual:
          if (act < rhs - tol) throw SolverError("LpModel: optimal point violates a >= row");
          break;
        case RowSense::Equal:
          if (std::abs(act - rhs) > tol) throw SolverError("LpModel: optimal point violates an = row");
          break;
      }
    }
    for (int j = 0; j < m_.num_variables(); ++j) {
      if (res.x[j] < m_.vars_[j].lo - 1e-7 || res.x[j] > m_.vars_[j].hi + 1e-7) {
        throw SolverError("LpModel: optimal point violates a variable bound");
      }
    }
  }
};

LpResult LpModel::solve() {
  SimplexRun run(*this);
  return run.run();
}

LpResult solve_lp(LpModel& model) { return model.solve(); }

std::string LpModel::dump() const {
  std::ostringstream out;
  out << "min";
  for (int j = 0; j < num_variables(); ++j) out << " " << vars_[j].obj << "*x" << j;
  out << "\n";
  for (int j = 0; j < num_variables(); ++j) {
    out << "x" << j << " in [" << vars_[j].lo << ", " << vars_[j].hi << "]\n";
  }
  for (int r = 0; r < num_rows(); ++r) {
    out << "row" << r << ":";
    for (int j = 0; j < num_variables(); ++j) {
      if (rows_[r].coeffs[j] != 0.0) out << " " << rows_[r].coeffs[j] << "*x" << j;
    }
    switch (rows_[r].sense) {
      case RowSense::LessEqual: out << " <= "; break;
      case RowSense::Equal: out << " = "; break;
      case RowSense::GreaterEqual: out << " >= "; break;
    }
    out << rows_[r].rhs << "\n";
  }
  return out.str();
}

}  // namespace mstn
