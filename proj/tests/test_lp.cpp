#include "mstn/lp.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "lp_oracle.hpp"
#include "mstn/errors.hpp"
#include "mstn/rng.hpp"

namespace mstn {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

TEST(Lp, BoundOnlyProblem) {
  LpModel lp;
  lp.add_variable(0.0, 1.0, -1.0);
  const LpResult res = lp.solve();
  ASSERT_EQ(res.status, LpStatus::Optimal);
  EXPECT_NEAR(res.x[0], 1.0, 1e-9);
  EXPECT_NEAR(res.objective, -1.0, 1e-9);
}

TEST(Lp, SimpleTwoVariable) {
  LpModel lp;
  lp.add_variable(0.0, 5.0, 1.0);
  lp.add_variable(0.0, 5.0, 1.0);
  lp.add_row({1.0, 1.0}, RowSense::GreaterEqual, 2.0);
  const LpResult res = lp.solve();
  ASSERT_EQ(res.status, LpStatus::Optimal);
  EXPECT_NEAR(res.objective, 2.0, 1e-9);
}

TEST(Lp, UnboundedDetected) {
  LpModel lp;
  lp.add_variable(0.0, kInf, -1.0);
  const LpResult res = lp.solve();
  EXPECT_EQ(res.status, LpStatus::Unbounded);
}

TEST(Lp, InfeasibleDetected) {
  LpModel lp;
  lp.add_variable(0.0, 1.0, 1.0);
  lp.add_row({1.0}, RowSense::GreaterEqual, 2.0);
  const LpResult res = lp.solve();
  EXPECT_EQ(res.status, LpStatus::Infeasible);
}

TEST(Lp, EqualityRowAndFreeVariable) {
  LpModel lp;
  lp.add_variable(-kInf, kInf, 1.0);
  lp.add_variable(0.0, 10.0, 0.0);
  lp.add_row({1.0, 1.0}, RowSense::Equal, 4.0);
  const LpResult res = lp.solve();
  ASSERT_EQ(res.status, LpStatus::Optimal);
  EXPECT_NEAR(res.objective, -6.0, 1e-9);  // x = 4 - 10
}

TEST(Lp, AddRemoveRowRestoresObjective) {
  LpModel lp;
  lp.add_variable(0.0, 4.0, -1.0);
  lp.add_variable(0.0, 4.0, -2.0);
  lp.add_row({1.0, 1.0}, RowSense::LessEqual, 6.0);
  const LpResult base = lp.solve();
  ASSERT_EQ(base.status, LpStatus::Optimal);
  EXPECT_NEAR(base.objective, -10.0, 1e-9);  // x=(2,4)

  // Redundant row leaves the optimum unchanged.
  const int redundant = lp.add_row({1.0, 0.0}, RowSense::LessEqual, 100.0);
  EXPECT_NEAR(lp.solve().objective, base.objective, 1e-9);
  lp.remove_row(redundant);

  // A violated cut moves the objective up (minimization).
  const int cut = lp.add_row({0.0, 1.0}, RowSense::LessEqual, 1.0);
  const LpResult tightened = lp.solve();
  ASSERT_EQ(tightened.status, LpStatus::Optimal);
  EXPECT_GE(tightened.objective, base.objective - 1e-9);
  EXPECT_NEAR(tightened.objective, -6.0, 1e-9);  // x=(4,1)

  lp.remove_row(cut);
  EXPECT_NEAR(lp.solve().objective, base.objective, 1e-9);
}

TEST(Lp, WarmStartAfterCutMatchesColdSolve) {
  SplitMix64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> obj(4);
    for (double& c : obj) c = rng.uniform(-2, 2);
    std::vector<std::vector<double>> rows;
    std::vector<RowSense> senses;
    std::vector<double> rhs;
    for (int r = 0; r < 4; ++r) {
      std::vector<double> row(4);
      for (double& v : row) v = rng.uniform(-1, 1);
      rows.push_back(std::move(row));
      senses.push_back(r == 3 ? RowSense::GreaterEqual : RowSense::LessEqual);
      rhs.push_back(r == 3 ? rng.uniform(-1.0, 1.0) : rng.uniform(0.5, 3.0));
    }

    // Warm: solve with three rows, then add the fourth and re-solve.
    LpModel warm;
    for (double c : obj) warm.add_variable(0.0, 3.0, c);
    for (int r = 0; r < 3; ++r) warm.add_row(rows[r], senses[r], rhs[r]);
    (void)warm.solve();
    warm.add_row(rows[3], senses[3], rhs[3]);
    const LpResult warm_res = warm.solve();

    // Cold: all four rows from scratch.
    LpModel cold;
    for (double c : obj) cold.add_variable(0.0, 3.0, c);
    for (int r = 0; r < 4; ++r) cold.add_row(rows[r], senses[r], rhs[r]);
    const LpResult cold_res = cold.solve();

    ASSERT_EQ(warm_res.status, cold_res.status) << "trial " << trial;
    if (warm_res.status == LpStatus::Optimal) {
      EXPECT_NEAR(warm_res.objective, cold_res.objective, 1e-7) << "trial " << trial;
    }
  }
}

using testsupport::DenseLp;
using testsupport::oracle_best;
using testsupport::random_lp;
using testsupport::solve_dense;

TEST(Lp, RandomProblemsMatchVertexEnumeration) {
  SplitMix64 rng(101);
  int optimal = 0, infeasible = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const DenseLp p = random_lp(rng);
    const LpResult res = solve_dense(p);
    const auto best = oracle_best(p);
    if (best) {
      ASSERT_EQ(res.status, LpStatus::Optimal) << "trial " << trial;
      EXPECT_NEAR(res.objective, *best, 1e-7 * (1.0 + std::abs(*best))) << "trial " << trial;
      ++optimal;
    } else {
      EXPECT_EQ(res.status, LpStatus::Infeasible) << "trial " << trial;
      ++infeasible;
    }
  }
  EXPECT_GT(optimal, 50);
  EXPECT_GT(infeasible, 10);
}

TEST(Lp, DeterministicAcrossRuns) {
  SplitMix64 rng(131);
  const DenseLp p = random_lp(rng);
  const LpResult a = solve_dense(p);
  const LpResult b = solve_dense(p);
  ASSERT_EQ(a.status, b.status);
  if (a.status == LpStatus::Optimal) {
    EXPECT_EQ(a.objective, b.objective);  // bitwise
    EXPECT_EQ(a.x, b.x);
  }
}

TEST(Lp, WeakDualitySpotCheck) {
  SplitMix64 rng(141);
  for (int trial = 0; trial < 50; ++trial) {
    const DenseLp p = random_lp(rng);
    const LpResult res = solve_dense(p);
    if (res.status != LpStatus::Optimal) continue;
    // Any feasible random point scores no better than the optimum.
    for (int probe = 0; probe < 50; ++probe) {
      std::vector<double> x(p.n);
      for (int i = 0; i < p.n; ++i) x[i] = rng.uniform(p.lo[i], p.hi[i]);
      bool ok = true;
      for (std::size_t r = 0; r < p.rows.size() && ok; ++r) {
        double act = 0.0;
        for (int i = 0; i < p.n; ++i) act += p.rows[r][i] * x[i];
        if (p.senses[r] == RowSense::LessEqual) ok = act <= p.rhs[r];
        if (p.senses[r] == RowSense::GreaterEqual) ok = act >= p.rhs[r];
      }
      if (!ok) continue;
      double obj = 0.0;
      for (int i = 0; i < p.n; ++i) obj += p.c[i] * x[i];
      EXPECT_GE(obj, res.objective - 1e-7 * (1.0 + std::abs(res.objective)));
    }
  }
}

TEST(Lp, BadUsageThrows) {
  LpModel lp;
  EXPECT_THROW(lp.add_variable(2.0, 1.0, 0.0), UsageError);
  lp.add_variable(0.0, 1.0, 0.0);
  EXPECT_THROW(lp.remove_row(0), UsageError);
  EXPECT_THROW(lp.add_row({1.0, 2.0}, RowSense::Equal, 0.0), UsageError);
}

}  // namespace
}  // namespace mstn
