#include "mstn/instance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mstn/errors.hpp"
#include "mstn/rng.hpp"

namespace mstn {

using json = nlohmann::json;

int Instance::edge_index(int v, int w) const {
  if (v > w) std::swap(v, w);
  for (int e = 0; e < num_edges(); ++e) {
    if (edges[e].first == v && edges[e].second == w) return e;
  }
  return -1;
}

double Instance::center_distance(int e) const {
  const auto& [v, w] = edges[e];
  return distance(vertices[v].center, vertices[w].center, norm);
}

void Instance::validate() const {
  const int n = num_vertices();
  if (n < 2) throw ValidationError("instance '" + name + "': needs at least 2 vertices");
  if (dimension < 1) throw ValidationError("instance '" + name + "': dimension must be >= 1");
  if (static_cast<int>(vertex_ids.size()) != n) {
    throw ValidationError("instance '" + name + "': vertex_ids size mismatch");
  }
  for (int v = 0; v < n; ++v) {
    const Neighborhood& nb = vertices[v];
    if (nb.dimension() != dimension) {
      throw ValidationError("instance '" + name + "': vertex " + std::to_string(vertex_ids[v]) +
                            " center has dimension " + std::to_string(nb.dimension()));
    }
    for (double c : nb.center) {
      if (!std::isfinite(c)) {
        throw ValidationError("instance '" + name + "': vertex " +
                              std::to_string(vertex_ids[v]) + " has non-finite center");
      }
    }
    if (!(nb.radius >= 0.0) || !std::isfinite(nb.radius)) {
      throw ValidationError("instance '" + name + "': vertex " + std::to_string(vertex_ids[v]) +
                            " has invalid radius");
    }
    if (v > 0 && vertex_ids[v] <= vertex_ids[v - 1]) {
      throw ValidationError("instance '" + name + "': vertex ids not strictly increasing");
    }
  }
  std::vector<std::pair<int, int>> seen;
  for (const auto& [v, w] : edges) {
    if (v < 0 || w < 0 || v >= n || w >= n) {
      throw ValidationError("instance '" + name + "': edge endpoint out of range");
    }
    if (v == w) {
      throw ValidationError("instance '" + name + "': self-loop at vertex " +
                            std::to_string(vertex_ids[v]));
    }
    if (v > w) throw ValidationError("instance '" + name + "': edge not normalized v < w");
    seen.emplace_back(v, w);
  }
  if (!std::is_sorted(seen.begin(), seen.end())) {
    throw ValidationError("instance '" + name + "': edges not in lexicographic order");
  }
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
    throw ValidationError("instance '" + name + "': duplicate edge");
  }
  // Connectivity.
  std::vector<int> comp(n, -1);
  std::vector<int> stack = {0};
  comp[0] = 0;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (const auto& [a, b] : edges) {
      const int other = a == v ? b : (b == v ? a : -1);
      if (other >= 0 && comp[other] < 0) {
        comp[other] = 0;
        stack.push_back(other);
      }
    }
  }
  for (int v = 0; v < n; ++v) {
    if (comp[v] < 0) {
      throw ValidationError("instance '" + name + "': graph is disconnected (vertex " +
                            std::to_string(vertex_ids[v]) + " unreachable)");
    }
  }
}

bool Instance::operator==(const Instance& other) const {
  if (name != other.name || dimension != other.dimension || norm != other.norm ||
      vertex_ids != other.vertex_ids || edges != other.edges || seed != other.seed ||
      vertices.size() != other.vertices.size()) {
    return false;
  }
  for (std::size_t v = 0; v < vertices.size(); ++v) {
    const auto& a = vertices[v];
    const auto& b = other.vertices[v];
    if (a.shape != b.shape || a.center != b.center || a.radius != b.radius) return false;
  }
  return true;
}

Instance generate(const GeneratorConfig& config) {
  if (config.n < 2) throw UsageError("generate: n must be >= 2");
  if (config.n > 10000) throw UsageError("generate: n must be <= 10000");
  if (config.dimension != 2 && config.dimension != 3) {
    throw UsageError("generate: dimension must be 2 or 3");
  }
  if (config.radii_scenario < 1 || config.radii_scenario > 4) {
    throw UsageError("generate: radii_scenario must be in 1..4");
  }
  if (!config.complete) throw UsageError("generate: only complete graphs are generated");

  const double r_lo = 5.0 * (config.radii_scenario - 1);
  const double r_hi = 5.0 * config.radii_scenario;

  SplitMix64 rng(config.seed);
  Instance inst;
  inst.dimension = config.dimension;
  inst.norm = Norm::L2;
  inst.seed = config.seed;
  {
    std::ostringstream name;
    name << "r" << config.radii_scenario << "-n" << config.n << "-d" << config.dimension
         << "-s" << config.seed;
    inst.name = name.str();
  }
  inst.vertices.reserve(config.n);
  inst.vertex_ids.reserve(config.n);
  for (int v = 0; v < config.n; ++v) {
    Point c(config.dimension);
    for (int k = 0; k < config.dimension; ++k) c[k] = rng.uniform(config.coord_lo, config.coord_hi);
    const double r = rng.uniform(r_lo, r_hi);
    inst.vertices.push_back(Neighborhood::ball(std::move(c), r));
    inst.vertex_ids.push_back(v + 1);
  }
  for (int v = 0; v < config.n; ++v) {
    for (int w = v + 1; w < config.n; ++w) inst.edges.emplace_back(v, w);
  }
  inst.validate();
  return inst;
}

namespace {

json require_field(const json& doc, const char* field) {
  if (!doc.contains(field)) {
    throw ValidationError(std::string("instance document: missing field '") + field + "'");
  }
  return doc.at(field);
}

}  // namespace

std::string save_instance(const Instance& instance) {
  json doc;
  doc["name"] = instance.name;
  doc["dimension"] = instance.dimension;
  doc["norm"] = to_string(instance.norm);
  json verts = json::array();
  for (int v = 0; v < instance.num_vertices(); ++v) {
    const Neighborhood& nb = instance.vertices[v];
    json jv;
    jv["id"] = instance.vertex_ids[v];
    jv["shape"] = nb.shape == Neighborhood::Shape::Ball ? "ball" : "box";
    jv["center"] = nb.center;
    jv["radius"] = nb.radius;
    verts.push_back(std::move(jv));
  }
  doc["vertices"] = std::move(verts);
  json edges = json::array();
  for (const auto& [v, w] : instance.edges) {
    edges.push_back(json::array({instance.vertex_ids[v], instance.vertex_ids[w]}));
  }
  doc["edges"] = std::move(edges);
  if (instance.seed) doc["seed"] = *instance.seed;
  return doc.dump(2) + "\n";
}

Instance load_instance(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& err) {
    throw ValidationError(std::string("instance document: not valid JSON: ") + err.what());
  }
  Instance inst;
  inst.name = require_field(doc, "name").get<std::string>();
  inst.dimension = require_field(doc, "dimension").get<int>();
  inst.norm = norm_from_string(require_field(doc, "norm").get<std::string>());
  if (doc.contains("seed")) inst.seed = doc.at("seed").get<std::uint64_t>();

  struct RawVertex {
    int id;
    Neighborhood nb;
  };
  std::vector<RawVertex> raw;
  for (const json& jv : require_field(doc, "vertices")) {
    RawVertex rv;
    rv.id = require_field(jv, "id").get<int>();
    const std::string shape = require_field(jv, "shape").get<std::string>();
    Point center = require_field(jv, "center").get<Point>();
    const double radius = require_field(jv, "radius").get<double>();
    if (shape == "ball") {
      rv.nb = Neighborhood::ball(std::move(center), radius);
    } else if (shape == "box") {
      rv.nb = Neighborhood::box(std::move(center), radius);
    } else {
      throw ValidationError("instance document: vertex " + std::to_string(rv.id) +
                            ": unknown shape '" + shape + "'");
    }
    raw.push_back(std::move(rv));
  }
  std::sort(raw.begin(), raw.end(), [](const RawVertex& a, const RawVertex& b) { return a.id < b.id; });
  std::map<int, int> index_of;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (!index_of.emplace(raw[i].id, static_cast<int>(i)).second) {
      throw ValidationError("instance document: duplicate vertex id " + std::to_string(raw[i].id));
    }
    inst.vertex_ids.push_back(raw[i].id);
    inst.vertices.push_back(std::move(raw[i].nb));
  }

  for (const json& je : require_field(doc, "edges")) {
    if (!je.is_array() || je.size() != 2) {
      throw ValidationError("instance document: edge entries must be [v, w] pairs");
    }
    const int a = je[0].get<int>();
    const int b = je[1].get<int>();
    const auto ia = index_of.find(a);
    const auto ib = index_of.find(b);
    if (ia == index_of.end() || ib == index_of.end()) {
      throw ValidationError("instance document: edge [" + std::to_string(a) + "," +
                            std::to_string(b) + "] references unknown vertex id");
    }
    if (a == b) {
      throw ValidationError("instance document: edge [" + std::to_string(a) + "," +
                            std::to_string(b) + "] is a self-loop");
    }
    int v = ia->second, w = ib->second;
    if (v > w) std::swap(v, w);
    inst.edges.emplace_back(v, w);
  }
  std::sort(inst.edges.begin(), inst.edges.end());
  const auto dup = std::adjacent_find(inst.edges.begin(), inst.edges.end());
  if (dup != inst.edges.end()) {
    throw ValidationError("instance document: duplicate edge [" +
                          std::to_string(inst.vertex_ids[dup->first]) + "," +
                          std::to_string(inst.vertex_ids[dup->second]) + "]");
  }
  inst.validate();
  return inst;
}

Instance load_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open instance file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_instance(buf.str());
}

void save_instance_file(const Instance& instance, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write instance file: " + path);
  out << save_instance(instance);
}

Instance example1() {
  Instance inst;
  inst.name = "example1";
  inst.dimension = 2;
  inst.norm = Norm::L2;
  const std::vector<std::pair<Point, double>> data = {
      {{0.0, 5.0}, 1.0}, {{1.0, 1.0}, 0.6}, {{1.0, 6.0}, 1.0}, {{1.0, 4.0}, 0.6},
      {{3.5, 3.0}, 1.4}, {{9.0, 3.0}, 2.4}, {{7.5, 0.0}, 0.8}, {{8.0, 6.0}, 1.0}};
  for (std::size_t v = 0; v < data.size(); ++v) {
    inst.vertices.push_back(Neighborhood::ball(data[v].first, data[v].second));
    inst.vertex_ids.push_back(static_cast<int>(v) + 1);
  }
  const std::vector<std::pair<int, int>> edges_1based = {
      {1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {2, 5}, {2, 7}, {3, 5},
      {3, 8}, {4, 5}, {5, 6}, {5, 7}, {5, 8}, {6, 7}, {6, 8}};
  for (const auto& [v, w] : edges_1based) inst.edges.emplace_back(v - 1, w - 1);
  std::sort(inst.edges.begin(), inst.edges.end());
  inst.validate();
  return inst;
}

}  // namespace mstn
