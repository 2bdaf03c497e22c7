#include "mstn/model_export.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "mstn/errors.hpp"
#include "mstn/preprocess.hpp"

namespace mstn {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Shared continuous core: x/u/theta/y variables, bound rows, linking rows and
// the distance + membership cones.
struct CoreLayout {
  int m, n, d;
  int x0 = 0, u0, th0, y0;
  int yvar(int v, int k) const { return y0 + v * d + k; }
};

CoreLayout build_core(const Instance& instance, ExportModel& model,
                      const std::vector<EdgeBounds>& bounds) {
  if (instance.norm != Norm::L2) {
    throw CapabilityError("model export: only the L2 edge norm is supported");
  }
  CoreLayout lay;
  lay.m = instance.num_edges();
  lay.n = instance.num_vertices();
  lay.d = instance.dimension;
  lay.u0 = lay.m;
  lay.th0 = 2 * lay.m;
  lay.y0 = 3 * lay.m;
  model.num_vars = 3 * lay.m + lay.n * lay.d;
  for (int e = 0; e < lay.m; ++e) model.var_names.push_back("x" + std::to_string(e));
  for (int e = 0; e < lay.m; ++e) model.var_names.push_back("u" + std::to_string(e));
  for (int e = 0; e < lay.m; ++e) model.var_names.push_back("theta" + std::to_string(e));
  for (int v = 0; v < lay.n; ++v) {
    for (int k = 0; k < lay.d; ++k) {
      model.var_names.push_back("y" + std::to_string(v) + "_" + std::to_string(k));
    }
  }
  for (int e = 0; e < lay.m; ++e) model.integer_vars.push_back(lay.x0 + e);

  // Domains: 0 <= x <= 1, u >= 0, theta >= 0.
  for (int e = 0; e < lay.m; ++e) {
    model.rows.push_back({{{lay.x0 + e, 1.0}}, 0.0, RowSense::GreaterEqual});
    model.rows.push_back({{{lay.x0 + e, 1.0}}, -1.0, RowSense::LessEqual});
  }
  for (int e = 0; e < lay.m; ++e) {
    model.rows.push_back({{{lay.u0 + e, 1.0}}, 0.0, RowSense::GreaterEqual});
  }
  for (int e = 0; e < lay.m; ++e) {
    model.rows.push_back({{{lay.th0 + e, 1.0}}, 0.0, RowSense::GreaterEqual});
  }
  // Linearization: theta_e - u_e - U_e x_e + U_e >= 0 and theta_e - u_e x_e >= 0.
  for (int e = 0; e < lay.m; ++e) {
    model.rows.push_back({{{lay.th0 + e, 1.0}, {lay.u0 + e, -1.0}, {lay.x0 + e, -bounds[e].upper}},
                          bounds[e].upper,
                          RowSense::GreaterEqual});
  }
  for (int e = 0; e < lay.m; ++e) {
    model.rows.push_back(
        {{{lay.th0 + e, 1.0}, {lay.x0 + e, -bounds[e].lower}}, 0.0, RowSense::GreaterEqual});
  }
  // Distance cones: u_e >= ||y_v - y_w||.
  for (int e = 0; e < lay.m; ++e) {
    const auto& [v, w] = instance.edges[e];
    ExportModel::Cone cone;
    cone.rows.push_back({{{lay.u0 + e, 1.0}}, 0.0});
    for (int k = 0; k < lay.d; ++k) {
      cone.rows.push_back({{{lay.yvar(v, k), 1.0}, {lay.yvar(w, k), -1.0}}, 0.0});
    }
    model.cones.push_back(std::move(cone));
  }
  // Membership: ball -> cone, box -> coordinate bounds.
  for (int v = 0; v < lay.n; ++v) {
    const Neighborhood& nb = instance.vertices[v];
    if (nb.shape == Neighborhood::Shape::Ball) {
      ExportModel::Cone cone;
      cone.rows.push_back({{}, nb.radius});
      for (int k = 0; k < lay.d; ++k) {
        cone.rows.push_back({{{lay.yvar(v, k), 1.0}}, -nb.center[k]});
      }
      model.cones.push_back(std::move(cone));
    } else {
      for (int k = 0; k < lay.d; ++k) {
        model.rows.push_back(
            {{{lay.yvar(v, k), 1.0}}, -(nb.center[k] - nb.radius), RowSense::GreaterEqual});
        model.rows.push_back(
            {{{lay.yvar(v, k), 1.0}}, -(nb.center[k] + nb.radius), RowSense::LessEqual});
      }
    }
  }
  return lay;
}

void add_cardinality_row(const CoreLayout& lay, ExportModel& model) {
  ExportModel::LinearRow row;
  for (int e = 0; e < lay.m; ++e) row.terms.push_back({lay.x0 + e, 1.0});
  row.constant = -(lay.n - 1.0);
  row.sense = RowSense::Equal;
  model.rows.push_back(std::move(row));
}

}  // namespace

double ExportModel::row_value(const LinearRow& row, const std::vector<double>& v) const {
  double acc = row.constant;
  for (const auto& [j, a] : row.terms) acc += a * v[j];
  return acc;
}

double ExportModel::max_violation(const std::vector<double>& v) const {
  double worst = 0.0;
  for (const LinearRow& row : rows) {
    const double val = row_value(row, v);
    switch (row.sense) {
      case RowSense::GreaterEqual: worst = std::max(worst, -val); break;
      case RowSense::LessEqual: worst = std::max(worst, val); break;
      case RowSense::Equal: worst = std::max(worst, std::abs(val)); break;
    }
  }
  for (const Cone& cone : cones) {
    double t = cone.rows[0].constant;
    for (const auto& [j, a] : cone.rows[0].terms) t += a * v[j];
    double norm2 = 0.0;
    for (std::size_t i = 1; i < cone.rows.size(); ++i) {
      double zi = cone.rows[i].constant;
      for (const auto& [j, a] : cone.rows[i].terms) zi += a * v[j];
      norm2 += zi * zi;
    }
    worst = std::max(worst, std::sqrt(norm2) - t);
  }
  return worst;
}

ExportModel build_sec_model(const Instance& instance, int max_subset_size) {
  const int n = instance.num_vertices();
  if (max_subset_size < 2 || max_subset_size > n - 1) {
    throw UsageError("export_sec: max_subset_size must be in [2, |V|-1]");
  }
  // Row-count estimate before enumerating subsets.
  double estimate = 0.0;
  for (int k = 2; k <= max_subset_size; ++k) {
    double c = 1.0;
    for (int i = 0; i < k; ++i) c = c * (n - i) / (i + 1);
    estimate += c;
  }
  if (estimate > 5e6) {
    throw CapabilityError("export_sec: " + std::to_string(estimate) +
                          " subset rows exceed the memory budget");
  }

  const auto bounds = compute_bounds(instance);
  ExportModel model;
  model.header_comments.push_back("minimum spanning tree with neighborhoods, subset-row form");
  if (max_subset_size < n - 1) {
    model.header_comments.push_back("subset rows truncated to |S| <= " +
                                    std::to_string(max_subset_size) +
                                    "; lazy separation required for exactness");
  }
  const CoreLayout lay = build_core(instance, model, bounds);
  add_cardinality_row(lay, model);

  // All subset rows x(E(S)) <= |S|-1 for 2 <= |S| <= max_subset_size,
  // in combination order per size.
  for (int k = 2; k <= max_subset_size; ++k) {
    std::vector<int> comb(k);
    for (int i = 0; i < k; ++i) comb[i] = i;
    while (true) {
      ExportModel::LinearRow row;
      std::vector<bool> in(n, false);
      for (int v : comb) in[v] = true;
      for (int e = 0; e < lay.m; ++e) {
        if (in[instance.edges[e].first] && in[instance.edges[e].second]) {
          row.terms.push_back({lay.x0 + e, 1.0});
        }
      }
      row.constant = -(k - 1.0);
      row.sense = RowSense::LessEqual;
      model.rows.push_back(std::move(row));
      int i = k - 1;
      while (i >= 0 && comb[i] == n - k + i) --i;
      if (i < 0) break;
      ++comb[i];
      for (int j = i + 1; j < k; ++j) comb[j] = comb[j - 1] + 1;
    }
  }
  return model;
}

ExportModel build_mtz_model(const Instance& instance) {
  const auto bounds = compute_bounds(instance);
  ExportModel model;
  model.header_comments.push_back(
      "minimum spanning tree with neighborhoods, rooted-orientation form");
  const CoreLayout lay = build_core(instance, model, bounds);
  const int n = lay.n, m = lay.m;
  const int z0 = model.num_vars;         // two arcs per edge: 2e = v->w, 2e+1 = w->v
  const int s0 = z0 + 2 * m;
  model.num_vars = s0 + n;
  for (int e = 0; e < m; ++e) {
    const auto& [v, w] = instance.edges[e];
    model.var_names.push_back("z" + std::to_string(v) + "_" + std::to_string(w));
    model.var_names.push_back("z" + std::to_string(w) + "_" + std::to_string(v));
  }
  for (int v = 0; v < n; ++v) model.var_names.push_back("s" + std::to_string(v));
  for (int a = 0; a < 2 * m; ++a) model.integer_vars.push_back(z0 + a);

  add_cardinality_row(lay, model);

  // z binary bounds.
  for (int a = 0; a < 2 * m; ++a) {
    model.rows.push_back({{{z0 + a, 1.0}}, 0.0, RowSense::GreaterEqual});
    model.rows.push_back({{{z0 + a, 1.0}}, -1.0, RowSense::LessEqual});
  }
  // Edge/arc coupling: x_e = z_vw + z_wv.
  for (int e = 0; e < m; ++e) {
    model.rows.push_back(
        {{{lay.x0 + e, 1.0}, {z0 + 2 * e, -1.0}, {z0 + 2 * e + 1, -1.0}}, 0.0, RowSense::Equal});
  }
  // Root (vertex index 0) receives at least one arc.
  {
    ExportModel::LinearRow row;
    for (int e = 0; e < m; ++e) {
      const auto& [v, w] = instance.edges[e];
      if (w == 0) row.terms.push_back({z0 + 2 * e, 1.0});  // v -> w == root
      if (v == 0) row.terms.push_back({z0 + 2 * e + 1, 1.0});
    }
    row.constant = -1.0;
    row.sense = RowSense::GreaterEqual;
    model.rows.push_back(std::move(row));
  }
  // Every non-root vertex sends exactly one arc (toward the root).
  for (int v = 1; v < n; ++v) {
    ExportModel::LinearRow row;
    for (int e = 0; e < m; ++e) {
      const auto& [a, b] = instance.edges[e];
      if (a == v) row.terms.push_back({z0 + 2 * e, 1.0});
      if (b == v) row.terms.push_back({z0 + 2 * e + 1, 1.0});
    }
    row.constant = -1.0;
    row.sense = RowSense::Equal;
    model.rows.push_back(std::move(row));
  }
  // Label rows: an arc v->w forces s_v >= s_w + 1, so labels strictly
  // decrease toward the root and directed cycles are impossible.
  const auto label_row = [&](int arc, int from, int to) {
    model.rows.push_back({{{z0 + arc, static_cast<double>(n)}, {s0 + to, 1.0}, {s0 + from, -1.0}},
                          -(n - 1.0),
                          RowSense::LessEqual});
  };
  for (int e = 0; e < m; ++e) {
    const auto& [v, w] = instance.edges[e];
    label_row(2 * e, v, w);
    label_row(2 * e + 1, w, v);
  }
  // s_root = 1; 2 <= s_v <= n otherwise.
  model.rows.push_back({{{s0 + 0, 1.0}}, -1.0, RowSense::Equal});
  for (int v = 1; v < n; ++v) {
    model.rows.push_back({{{s0 + v, 1.0}}, -2.0, RowSense::GreaterEqual});
    model.rows.push_back({{{s0 + v, 1.0}}, -static_cast<double>(n), RowSense::LessEqual});
  }
  return model;
}

std::string to_cbf(const ExportModel& model) {
  std::ostringstream out;
  for (const std::string& c : model.header_comments) out << "# " << c << "\n";
  out << "VER\n1\n\n";
  out << "OBJSENSE\nMIN\n\n";
  out << "VAR\n" << model.num_vars << " 1\nF " << model.num_vars << "\n\n";
  if (!model.integer_vars.empty()) {
    out << "INT\n" << model.integer_vars.size() << "\n";
    for (int j : model.integer_vars) out << j << "\n";
    out << "\n";
  }

  // Map rows: scalar rows first (grouped into runs of equal cone type), then
  // quadratic cones as consecutive row blocks.
  const int num_scalar = static_cast<int>(model.rows.size());
  int num_cone_rows = 0;
  for (const auto& cone : model.cones) num_cone_rows += static_cast<int>(cone.rows.size());

  std::vector<std::pair<std::string, int>> cone_decls;
  for (const auto& row : model.rows) {
    const char* kind = row.sense == RowSense::GreaterEqual ? "L+"
                       : row.sense == RowSense::LessEqual  ? "L-"
                                                           : "L=";
    if (!cone_decls.empty() && cone_decls.back().first == kind) {
      ++cone_decls.back().second;
    } else {
      cone_decls.push_back({kind, 1});
    }
  }
  for (const auto& cone : model.cones) {
    cone_decls.push_back({"Q", static_cast<int>(cone.rows.size())});
  }

  out << "CON\n" << (num_scalar + num_cone_rows) << " " << cone_decls.size() << "\n";
  for (const auto& [kind, dim] : cone_decls) out << kind << " " << dim << "\n";
  out << "\n";

  // Objective: minimize sum of theta. The theta block sits after x and u; its
  // offset equals one third of the x/u/theta block, recovered from names.
  std::vector<std::pair<int, double>> obj;
  for (int j = 0; j < static_cast<int>(model.var_names.size()); ++j) {
    if (model.var_names[j].rfind("theta", 0) == 0) obj.push_back({j, 1.0});
  }
  out << "OBJACOORD\n" << obj.size() << "\n";
  for (const auto& [j, c] : obj) out << j << " " << fmt(c) << "\n";
  out << "\n";

  std::vector<std::string> acoord, bcoord;
  int row_index = 0;
  const auto emit_row = [&](const std::vector<std::pair<int, double>>& terms, double constant) {
    for (const auto& [j, a] : terms) {
      if (a != 0.0) {
        acoord.push_back(std::to_string(row_index) + " " + std::to_string(j) + " " + fmt(a));
      }
    }
    if (constant != 0.0) {
      bcoord.push_back(std::to_string(row_index) + " " + fmt(constant));
    }
    ++row_index;
  };
  for (const auto& row : model.rows) emit_row(row.terms, row.constant);
  for (const auto& cone : model.cones) {
    for (const auto& row : cone.rows) emit_row(row.terms, row.constant);
  }

  out << "ACOORD\n" << acoord.size() << "\n";
  for (const std::string& s : acoord) out << s << "\n";
  out << "\nBCOORD\n" << bcoord.size() << "\n";
  for (const std::string& s : bcoord) out << s << "\n";
  return out.str();
}

std::string export_sec(const Instance& instance, int max_subset_size) {
  return to_cbf(build_sec_model(instance, max_subset_size));
}

std::string export_mtz(const Instance& instance) {
  return to_cbf(build_mtz_model(instance));
}

}  // namespace mstn
