#include "mstn/instance.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "mstn/errors.hpp"
#include "mstn/preprocess.hpp"
#include "mstn/rng.hpp"

namespace mstn {
namespace {

TEST(Generate, StructureAndRadiiScenario) {
  GeneratorConfig cfg;
  cfg.n = 5;
  cfg.dimension = 2;
  cfg.radii_scenario = 1;
  cfg.seed = 42;
  const Instance inst = generate(cfg);
  EXPECT_EQ(inst.num_vertices(), 5);
  EXPECT_EQ(inst.num_edges(), 10);
  for (const Neighborhood& nb : inst.vertices) {
    EXPECT_GE(nb.radius, 0.0);
    EXPECT_LE(nb.radius, 5.0);
    for (double c : nb.center) {
      EXPECT_GE(c, 0.0);
      EXPECT_LE(c, 100.0);
    }
  }
}

TEST(Generate, ScenarioIntervals) {
  for (int scenario = 1; scenario <= 4; ++scenario) {
    GeneratorConfig cfg;
    cfg.n = 30;
    cfg.dimension = 3;
    cfg.radii_scenario = scenario;
    cfg.seed = 100 + scenario;
    const Instance inst = generate(cfg);
    EXPECT_EQ(inst.num_edges(), 30 * 29 / 2);
    for (const Neighborhood& nb : inst.vertices) {
      EXPECT_GE(nb.radius, 5.0 * (scenario - 1));
      EXPECT_LE(nb.radius, 5.0 * scenario);
    }
  }
}

TEST(Generate, DeterministicBytes) {
  GeneratorConfig cfg;
  cfg.n = 8;
  cfg.dimension = 3;
  cfg.radii_scenario = 2;
  cfg.seed = 7;
  EXPECT_EQ(save_instance(generate(cfg)), save_instance(generate(cfg)));
}

TEST(Generate, Scenario4IntersectionsHaveZeroLower) {
  GeneratorConfig cfg;
  cfg.n = 5;
  cfg.dimension = 2;
  cfg.radii_scenario = 4;
  cfg.seed = 7;
  const Instance inst = generate(cfg);
  const auto bounds = compute_bounds(inst);
  for (int e = 0; e < inst.num_edges(); ++e) {
    const auto& [v, w] = inst.edges[e];
    const double gap = distance(inst.vertices[v].center, inst.vertices[w].center, Norm::L2) -
                       inst.vertices[v].radius - inst.vertices[w].radius;
    if (gap <= 0.0) {
      EXPECT_DOUBLE_EQ(bounds[e].lower, 0.0);
    } else {
      EXPECT_GT(bounds[e].lower, 0.0);
    }
  }
}

TEST(Generate, RejectsBadConfig) {
  GeneratorConfig cfg;
  cfg.n = 1;
  EXPECT_THROW(generate(cfg), UsageError);
}

TEST(SaveLoad, RoundTripIsIdentity) {
  const Instance fixture = example1();
  EXPECT_EQ(load_instance(save_instance(fixture)), fixture);

  SplitMix64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    GeneratorConfig cfg;
    cfg.n = 2 + static_cast<int>(rng.next_below(9));
    cfg.dimension = rng.next_below(2) == 0 ? 2 : 3;
    cfg.radii_scenario = 1 + static_cast<int>(rng.next_below(4));
    cfg.seed = rng.next_u64();
    const Instance inst = generate(cfg);
    EXPECT_EQ(load_instance(save_instance(inst)), inst);
  }
}

TEST(SaveLoad, SelfLoopRejected) {
  std::string doc = R"({
    "name": "bad", "dimension": 2, "norm": "L2",
    "vertices": [
      {"id": 1, "shape": "ball", "center": [0, 0], "radius": 1},
      {"id": 2, "shape": "ball", "center": [1, 1], "radius": 1},
      {"id": 3, "shape": "ball", "center": [2, 2], "radius": 1}
    ],
    "edges": [[1, 2], [2, 3], [3, 3]]
  })";
  EXPECT_THROW(
      {
        try {
          load_instance(doc);
        } catch (const ValidationError& err) {
          EXPECT_NE(std::string(err.what()).find("self-loop"), std::string::npos);
          throw;
        }
      },
      ValidationError);
}

TEST(SaveLoad, MissingDimensionNamesField) {
  std::string doc = R"({
    "name": "bad", "norm": "L2",
    "vertices": [
      {"id": 1, "shape": "ball", "center": [0, 0], "radius": 1},
      {"id": 2, "shape": "ball", "center": [1, 1], "radius": 1}
    ],
    "edges": [[1, 2]]
  })";
  EXPECT_THROW(
      {
        try {
          load_instance(doc);
        } catch (const ValidationError& err) {
          EXPECT_NE(std::string(err.what()).find("dimension"), std::string::npos);
          throw;
        }
      },
      ValidationError);
}

TEST(SaveLoad, DisconnectedRejected) {
  std::string doc = R"({
    "name": "bad", "dimension": 2, "norm": "L2",
    "vertices": [
      {"id": 1, "shape": "ball", "center": [0, 0], "radius": 1},
      {"id": 2, "shape": "ball", "center": [1, 1], "radius": 1},
      {"id": 3, "shape": "ball", "center": [2, 2], "radius": 1},
      {"id": 4, "shape": "ball", "center": [3, 3], "radius": 1}
    ],
    "edges": [[1, 2], [3, 4]]
  })";
  EXPECT_THROW(load_instance(doc), ValidationError);
}

TEST(SaveLoad, DuplicateEdgeRejected) {
  std::string doc = R"({
    "name": "bad", "dimension": 2, "norm": "L2",
    "vertices": [
      {"id": 1, "shape": "ball", "center": [0, 0], "radius": 1},
      {"id": 2, "shape": "ball", "center": [1, 1], "radius": 1}
    ],
    "edges": [[1, 2], [2, 1]]
  })";
  EXPECT_THROW(load_instance(doc), ValidationError);
}

TEST(Example1, MatchesDrawing) {
  const Instance inst = example1();
  EXPECT_EQ(inst.num_vertices(), 8);
  EXPECT_EQ(inst.num_edges(), 15);
  EXPECT_EQ(inst.vertices[6].center, (Point{7.5, 0.0}));
  EXPECT_DOUBLE_EQ(inst.vertices[6].radius, 0.8);
  EXPECT_EQ(inst.norm, Norm::L2);
  EXPECT_GE(inst.edge_index(0, 2), 0);   // 1-3 present
  EXPECT_LT(inst.edge_index(0, 7), 0);   // 1-8 absent
}

TEST(Example1, Edge13ClosedFormBounds) {
  const Instance inst = example1();
  const int e = inst.edge_index(0, 2);  // vertices 1 and 3
  ASSERT_GE(e, 0);
  const auto bounds = compute_bounds(inst);
  EXPECT_DOUBLE_EQ(bounds[e].lower, 0.0);  // sqrt(2) < 1 + 1
  EXPECT_NEAR(bounds[e].upper, std::sqrt(2.0) + 2.0, 1e-12);
}

}  // namespace
}  // namespace mstn
