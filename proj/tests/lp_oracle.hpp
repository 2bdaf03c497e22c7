#pragma once

// Test-only brute-force LP reference: enumerates all basic points (active
// sets of size n among row equalities and variable bounds) and keeps the best
// feasible one. Independent of the simplex implementation.

#include <cmath>
#include <optional>
#include <vector>

#include "mstn/lp.hpp"
#include "mstn/rng.hpp"

namespace mstn::testsupport {

struct DenseLp {
  int n = 5;
  std::vector<double> lo, hi, c;
  std::vector<std::vector<double>> rows;
  std::vector<RowSense> senses;
  std::vector<double> rhs;
};

inline DenseLp random_lp(SplitMix64& rng) {
  DenseLp p;
  p.lo.resize(p.n);
  p.hi.resize(p.n);
  p.c.resize(p.n);
  for (int i = 0; i < p.n; ++i) {
    const double a = rng.uniform(-5, 5);
    const double b = rng.uniform(-5, 5);
    p.lo[i] = std::min(a, b);
    p.hi[i] = std::max(a, b);
    p.c[i] = rng.uniform(-2, 2);
  }
  for (int r = 0; r < 5; ++r) {
    std::vector<double> row(p.n);
    for (double& v : row) v = rng.uniform(-3, 3);
    p.rows.push_back(row);
    p.senses.push_back(rng.next_below(2) == 0 ? RowSense::LessEqual : RowSense::GreaterEqual);
    p.rhs.push_back(rng.uniform(-5, 5));
  }
  return p;
}

inline LpResult solve_dense(const DenseLp& p) {
  LpModel lp;
  for (int i = 0; i < p.n; ++i) lp.add_variable(p.lo[i], p.hi[i], p.c[i]);
  for (std::size_t r = 0; r < p.rows.size(); ++r) lp.add_row(p.rows[r], p.senses[r], p.rhs[r]);
  return lp.solve();
}

inline std::optional<double> oracle_best(const DenseLp& p) {
  const int n = p.n;
  const int num_constraints = static_cast<int>(p.rows.size()) + 2 * n;
  std::optional<double> best;

  const auto normal_of = [&](int idx, std::vector<double>& a, double& b) {
    if (idx < static_cast<int>(p.rows.size())) {
      a = p.rows[idx];
      b = p.rhs[idx];
    } else if (idx < static_cast<int>(p.rows.size()) + n) {
      a.assign(n, 0.0);
      a[idx - p.rows.size()] = 1.0;
      b = p.lo[idx - p.rows.size()];
    } else {
      a.assign(n, 0.0);
      a[idx - p.rows.size() - n] = 1.0;
      b = p.hi[idx - p.rows.size() - n];
    }
  };

  const auto feasible = [&](const std::vector<double>& x) {
    for (int i = 0; i < n; ++i) {
      if (x[i] < p.lo[i] - 1e-7 || x[i] > p.hi[i] + 1e-7) return false;
    }
    for (std::size_t r = 0; r < p.rows.size(); ++r) {
      double act = 0.0;
      for (int i = 0; i < n; ++i) act += p.rows[r][i] * x[i];
      if (p.senses[r] == RowSense::LessEqual && act > p.rhs[r] + 1e-7) return false;
      if (p.senses[r] == RowSense::GreaterEqual && act < p.rhs[r] - 1e-7) return false;
      if (p.senses[r] == RowSense::Equal && std::abs(act - p.rhs[r]) > 1e-7) return false;
    }
    return true;
  };

  const auto consider = [&](const std::vector<int>& active) {
    std::vector<std::vector<double>> a(n, std::vector<double>(n + 1, 0.0));
    for (int r = 0; r < n; ++r) {
      std::vector<double> normal;
      double b;
      normal_of(active[r], normal, b);
      for (int i = 0; i < n; ++i) a[r][i] = normal[i];
      a[r][n] = b;
    }
    for (int col = 0; col < n; ++col) {
      int pivot = col;
      for (int r = col + 1; r < n; ++r) {
        if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
      }
      if (std::abs(a[pivot][col]) < 1e-9) return;
      std::swap(a[pivot], a[col]);
      for (int r = 0; r < n; ++r) {
        if (r == col) continue;
        const double f = a[r][col] / a[col][col];
        for (int cc = col; cc <= n; ++cc) a[r][cc] -= f * a[col][cc];
      }
    }
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = a[i][n] / a[i][i];
    if (!feasible(x)) return;
    double obj = 0.0;
    for (int i = 0; i < n; ++i) obj += p.c[i] * x[i];
    if (!best || obj < *best) best = obj;
  };

  std::vector<int> comb(n);
  for (int i = 0; i < n; ++i) comb[i] = i;
  while (true) {
    consider(comb);
    int i = n - 1;
    while (i >= 0 && comb[i] == num_constraints - n + i) --i;
    if (i < 0) break;
    ++comb[i];
    for (int j = i + 1; j < n; ++j) comb[j] = comb[j - 1] + 1;
  }
  return best;
}

}  // namespace mstn::testsupport
