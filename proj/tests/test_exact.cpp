#include "mstn/exact.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "mstn/oracle.hpp"
#include "mstn/rng.hpp"
#include "mstn/spanning_tree.hpp"

namespace mstn {
namespace {

Instance random_instance(int n, int dimension, int scenario, std::uint64_t seed) {
  GeneratorConfig cfg;
  cfg.n = n;
  cfg.dimension = dimension;
  cfg.radii_scenario = scenario;
  cfg.seed = seed;
  return generate(cfg);
}

Tree center_mst(const Instance& inst) {
  WeightVector w(inst.num_edges());
  for (int e = 0; e < inst.num_edges(); ++e) w[e] = inst.center_distance(e);
  return mst(inst, w);
}

TEST(BendersCut, SelfEvaluationIsExact) {
  const Instance inst = random_instance(5, 2, 2, 5);
  const auto bounds = compute_bounds(inst);
  const Tree tree = center_mst(inst);
  const GeometricSolution geo = solve_points(inst, tree);
  const BendersCut cut = make_cut(tree, geo);
  EXPECT_DOUBLE_EQ(cut.rhs_at(tree.incidence(inst), bounds), geo.objective);
}

TEST(BendersCut, SwapMatchesExchangeBound) {
  const Instance inst = random_instance(5, 2, 1, 6);
  const auto bounds = compute_bounds(inst);
  const Tree tree = center_mst(inst);
  const GeometricSolution geo = solve_points(inst, tree);
  const BendersCut cut = make_cut(tree, geo);

  // Find a single-swap neighbor: drop e1, add e2.
  for (const Tree& other : enumerate_all(inst)) {
    std::vector<int> dropped, added;
    std::set_difference(tree.edge_ids().begin(), tree.edge_ids().end(),
                        other.edge_ids().begin(), other.edge_ids().end(),
                        std::back_inserter(dropped));
    std::set_difference(other.edge_ids().begin(), other.edge_ids().end(),
                        tree.edge_ids().begin(), tree.edge_ids().end(), std::back_inserter(added));
    if (dropped.size() != 1 || added.size() != 1) continue;
    const double expected =
        geo.objective - bounds[dropped[0]].upper + bounds[added[0]].lower;
    EXPECT_NEAR(cut.rhs_at(other.incidence(inst), bounds), expected, 1e-9);
  }
}

TEST(BendersCut, ValidOnEveryTreeOfSmallInstances) {
  SplitMix64 rng(7);
  for (int trial = 0; trial < 3; ++trial) {
    const Instance inst = random_instance(5, 2, 1 + trial, 40 + trial);
    const auto bounds = compute_bounds(inst);
    const auto trees = enumerate_all(inst);
    ASSERT_EQ(trees.size(), 125u);
    // Cuts from a few source trees, checked against all trees.
    for (int pick = 0; pick < 5; ++pick) {
      const Tree& source = trees[rng.next_below(trees.size())];
      const GeometricSolution source_geo = solve_points(inst, source);
      const BendersCut cut = make_cut(source, source_geo);
      for (const Tree& target : trees) {
        const double u_target = solve_points(inst, target).objective;
        EXPECT_LE(cut.rhs_at(target.incidence(inst), bounds), u_target + 1e-6);
      }
    }
  }
}

TEST(SeparateSec, IntegralCyclesAreFound) {
  // Two triangles joined by a path: 0-1-2 cycle, 3-4-5 cycle, 2-3 path edge.
  Instance inst;
  inst.name = "cycles";
  inst.dimension = 2;
  inst.norm = Norm::L2;
  for (int v = 0; v < 6; ++v) {
    inst.vertices.push_back(Neighborhood::ball({static_cast<double>(v), 0.0}, 0.0));
    inst.vertex_ids.push_back(v + 1);
  }
  inst.edges = {{0, 1}, {0, 2}, {1, 2}, {2, 3}, {3, 4}, {3, 5}, {4, 5}};
  inst.validate();
  std::vector<double> x(inst.num_edges(), 1.0);
  x[3] = 0.0;  // connector {2,3} off: the support is exactly the two triangles
  const auto secs = separate_sec(inst, x);
  std::set<std::vector<int>> expected = {{0, 1, 2}, {3, 4, 5}};
  std::set<std::vector<int>> got(secs.begin(), secs.end());
  EXPECT_EQ(got, expected);
}

TEST(SeparateSec, SpanningTreeHasNoViolation) {
  const Instance inst = random_instance(6, 2, 1, 11);
  const Tree tree = center_mst(inst);
  EXPECT_TRUE(separate_sec(inst, tree.incidence(inst)).empty());
}

TEST(SeparateSec, HalfIntegralK4HasNoViolatedSet) {
  const Instance inst = random_instance(4, 2, 1, 12);
  ASSERT_EQ(inst.num_edges(), 6);
  const std::vector<double> x(6, 0.5);  // sum = 3 = n-1
  EXPECT_TRUE(separate_sec(inst, x).empty());
}

// Brute-force reference over all vertex subsets.
double max_violation_brute(const Instance& inst, const std::vector<double>& x,
                           std::vector<int>* argmax = nullptr) {
  const int n = inst.num_vertices();
  double best = -1e100;
  for (unsigned mask = 1; mask < (1u << n) - 1; ++mask) {
    const int size = __builtin_popcount(mask);
    if (size < 2) continue;
    double inside = 0.0;
    for (int e = 0; e < inst.num_edges(); ++e) {
      const auto& [v, w] = inst.edges[e];
      if ((mask >> v & 1) && (mask >> w & 1)) inside += x[e];
    }
    const double viol = inside - (size - 1.0);
    if (viol > best) {
      best = viol;
      if (argmax) {
        argmax->clear();
        for (int v = 0; v < n; ++v) {
          if (mask >> v & 1) argmax->push_back(v);
        }
      }
    }
  }
  return best;
}

TEST(SeparateSec, AgreesWithBruteForceOnRandomFractionalPoints) {
  SplitMix64 rng(1001);
  int violated_cases = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 5 + static_cast<int>(rng.next_below(4));  // 5..8
    const Instance inst = random_instance(n, 2, 1 + trial % 4, 2000 + trial);
    const int m = inst.num_edges();
    // Random point with sum = n-1, coordinates in [0,1].
    std::vector<double> x(m);
    double total = 0.0;
    for (double& v : x) total += (v = rng.next_double());
    double scale = (n - 1.0) / total;
    for (int rounds = 0; rounds < 12; ++rounds) {
      double overflow = 0.0, room = 0.0;
      for (double& v : x) {
        v = std::min(1.0, v * scale);
        if (v < 1.0) room += v;
      }
      total = 0.0;
      for (double v : x) total += v;
      overflow = (n - 1.0) - total;
      if (std::abs(overflow) < 1e-9) break;
      scale = (room + overflow) / room;
      for (double& v : x) {
        if (v < 1.0) v *= scale;
      }
      scale = 1.0;
      total = 0.0;
      for (double v : x) total += v;
      if (std::abs(total - (n - 1.0)) < 1e-9) break;
      scale = (n - 1.0) / total;
    }

    const double brute = max_violation_brute(inst, x);
    const auto secs = separate_sec(inst, x);
    if (brute > 1e-6) {
      ASSERT_FALSE(secs.empty()) << "missed violation " << brute << " at trial " << trial;
      ++violated_cases;
      for (const auto& s : secs) {
        double inside = 0.0;
        for (int e = 0; e < m; ++e) {
          const auto& [v, w] = inst.edges[e];
          if (std::count(s.begin(), s.end(), v) && std::count(s.begin(), s.end(), w)) {
            inside += x[e];
          }
        }
        EXPECT_GT(inside - (static_cast<double>(s.size()) - 1.0), 1e-6);
      }
    } else if (brute < -1e-6) {
      EXPECT_TRUE(secs.empty()) << "spurious violation at trial " << trial;
    }
  }
  EXPECT_GT(violated_cases, 5);
}

TEST(SolveIterative, RadiusZeroTerminatesImmediately) {
  SplitMix64 rng(3003);
  for (int trial = 0; trial < 10; ++trial) {
    Instance inst = random_instance(5 + trial % 3, 2, 1, 3100 + trial);
    for (Neighborhood& nb : inst.vertices) nb.radius = 0.0;
    const SolveReport report = solve_iterative(inst);
    EXPECT_EQ(report.status, SolveStatus::Optimal);
    EXPECT_LE(report.iterations, 1);
    double expected = 0.0;
    for (int e : center_mst(inst).edge_ids()) expected += inst.center_distance(e);
    EXPECT_NEAR(report.objective, expected, 1e-9 * (1.0 + expected));
    EXPECT_NEAR(report.bound, report.objective, 1e-6);
  }
}

TEST(SolveIterative, Example1FindsReferenceTree) {
  const Instance inst = example1();
  const SolveReport report = solve_iterative(inst);
  EXPECT_EQ(report.status, SolveStatus::Optimal);
  const std::vector<std::pair<int, int>> expected_1based = {{1, 3}, {1, 4}, {2, 5}, {4, 5},
                                                            {5, 6}, {6, 7}, {6, 8}};
  std::vector<int> expected;
  for (const auto& [v, w] : expected_1based) expected.push_back(inst.edge_index(v - 1, w - 1));
  std::sort(expected.begin(), expected.end());
  EXPECT_EQ(report.tree_edges, expected);
}

TEST(SolveMethods, AgreeWithOracleOnSmallInstances) {
  for (int trial = 0; trial < 6; ++trial) {
    const Instance inst = random_instance(5, trial % 2 == 0 ? 2 : 3, 1 + trial % 4, 500 + trial);
    const SolveReport oracle = solve_enumerate(inst);
    const SolveReport bc = solve_branch_and_cut(inst);
    const SolveReport iter = solve_iterative(inst);
    ASSERT_EQ(oracle.status, SolveStatus::Optimal);
    ASSERT_EQ(bc.status, SolveStatus::Optimal);
    ASSERT_EQ(iter.status, SolveStatus::Optimal);
    const double scale = std::max(1.0, oracle.objective);
    EXPECT_NEAR(bc.objective, oracle.objective, 1e-6 * scale) << inst.name;
    EXPECT_NEAR(iter.objective, oracle.objective, 1e-6 * scale) << inst.name;
  }
}

TEST(SolveBranchAndCut, SandwichAndCounters) {
  for (int trial = 0; trial < 4; ++trial) {
    const Instance inst = random_instance(6, 2, 1 + trial, 700 + trial);
    const auto bounds = compute_bounds(inst);
    WeightVector min_w(inst.num_edges());
    for (int e = 0; e < inst.num_edges(); ++e) min_w[e] = bounds[e].lower;
    const double lb_mst = tree_weight(mst(inst, min_w), min_w);
    const double ub_center = solve_points(inst, center_mst(inst)).objective;

    const SolveReport report = solve_branch_and_cut(inst);
    EXPECT_EQ(report.status, SolveStatus::Optimal);
    EXPECT_GE(report.objective, lb_mst - 1e-9);
    EXPECT_LE(report.objective, ub_center + 1e-9);
    EXPECT_GE(report.nodes, 1);
    EXPECT_GE(report.gap0, -1e-12);
  }
}

TEST(SolveBranchAndCut, RespectsPreprocessingFixings) {
  // Zero radii: classical MST; forced bridges must appear in the tree.
  Instance inst = random_instance(6, 2, 1, 808);
  for (Neighborhood& nb : inst.vertices) nb.radius = 0.0;
  const Reduction red = reduce(inst, compute_bounds(inst));
  const SolveReport report = solve_branch_and_cut(inst);
  for (int e : red.forced) {
    EXPECT_TRUE(std::count(report.tree_edges.begin(), report.tree_edges.end(), e));
  }
  for (int e : red.removed) {
    EXPECT_FALSE(std::count(report.tree_edges.begin(), report.tree_edges.end(), e));
  }
}

TEST(Preprocess, ReductionPreservesOracleOptimum) {
  // Safety on a handful of instances here; the acceptance suite covers 50.
  for (int trial = 0; trial < 8; ++trial) {
    const Instance inst = random_instance(5 + trial % 2, 2, 1 + trial % 4, 909 + trial);
    const Reduction red = reduce(inst, compute_bounds(inst));
    const SolveReport full = solve_enumerate(inst);

    // Oracle restricted to the reduced edge set.
    OracleOptions opts;
    double best = 1e100;
    bool any = false;
    enumerate_all(inst, 10'000'000, [&](const Tree& tree) {
      for (int e : red.removed) {
        if (tree.contains(e)) return;
      }
      for (int e : red.forced) {
        if (!tree.contains(e)) return;
      }
      any = true;
      const double obj = solve_points(inst, tree, opts.subproblem).objective;
      best = std::min(best, obj);
    });
    ASSERT_TRUE(any);
    EXPECT_NEAR(best, full.objective, 1e-9 * (1.0 + full.objective))
        << inst.name << " removed=" << red.removed.size() << " forced=" << red.forced.size();
  }
}

TEST(SolveBranchAndCut, TimeLimitReturnsIncumbent) {
  const Instance inst = random_instance(7, 2, 4, 4242);
  ExactOptions opts;
  opts.time_limit = 0.0;  // expire immediately after the initial incumbent
  const SolveReport report = solve_branch_and_cut(inst, opts);
  EXPECT_EQ(report.status, SolveStatus::TimeLimit);
  EXPECT_GT(report.objective, 0.0);
  EXPECT_FALSE(report.tree_edges.empty());
  EXPECT_LE(report.bound, report.objective + 1e-9);
}

}  // namespace
}  // namespace mstn
