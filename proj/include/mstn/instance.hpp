#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mstn/geometry.hpp"

namespace mstn {

// A connected undirected graph whose vertices live in convex neighborhoods.
// Vertices are addressed by index 0..n-1 (external ids are kept for I/O);
// edges are addressed by index into `edges`, which is sorted lexicographically
// by (v, w) with v < w. All modules use these edge ids.
struct Instance {
  std::string name;
  int dimension = 2;
  Norm norm = Norm::L2;
  std::vector<Neighborhood> vertices;
  std::vector<int> vertex_ids;                // external ids, ascending
  std::vector<std::pair<int, int>> edges;     // internal indices, v < w, sorted
  std::optional<std::uint64_t> seed;

  int num_vertices() const { return static_cast<int>(vertices.size()); }
  int num_edges() const { return static_cast<int>(edges.size()); }

  // Index of edge {v,w} (order-insensitive), or -1.
  int edge_index(int v, int w) const;

  // Euclidean/Lq distance between neighborhood centers of edge e.
  double center_distance(int e) const;

  // Throws ValidationError when structurally unsound (self-loops, duplicate
  // edges, out-of-range endpoints, disconnected graph, n < 2, bad dims).
  void validate() const;

  bool operator==(const Instance& other) const;
};

struct GeneratorConfig {
  int n = 5;
  int dimension = 2;         // 2 or 3
  int radii_scenario = 1;    // k in 1..4: radii uniform on [5(k-1), 5k]
  bool complete = true;
  double coord_lo = 0.0;
  double coord_hi = 100.0;
  std::uint64_t seed = 0;
};

// Deterministic benchmark instance: complete graph, centers i.i.d. uniform on
// [coord_lo, coord_hi]^d, ball radii uniform on the scenario interval. The
// stream is splitmix64(seed); per vertex the d coordinates are drawn first,
// then the radius. Same seed, same bytes.
Instance generate(const GeneratorConfig& config);

// JSON document I/O (.mstn.json). load(save(I)) == I.
std::string save_instance(const Instance& instance);
Instance load_instance(const std::string& text);
Instance load_instance_file(const std::string& path);
void save_instance_file(const Instance& instance, const std::string& path);

// The bundled 8-vertex fixture: L2 balls, 15 edges.
Instance example1();

}  // namespace mstn
