#include "mstn/svg.hpp"

#include <algorithm>
#include <sstream>

#include "mstn/errors.hpp"

namespace mstn {

std::string render_solution_svg(const Instance& instance, const SolveReport& report) {
  if (instance.dimension != 2) {
    throw CapabilityError("svg rendering supports planar instances only");
  }
  double lo_x = 1e100, lo_y = 1e100, hi_x = -1e100, hi_y = -1e100;
  for (const Neighborhood& nb : instance.vertices) {
    lo_x = std::min(lo_x, nb.center[0] - nb.radius);
    hi_x = std::max(hi_x, nb.center[0] + nb.radius);
    lo_y = std::min(lo_y, nb.center[1] - nb.radius);
    hi_y = std::max(hi_y, nb.center[1] + nb.radius);
  }
  const double pad = 0.05 * std::max(hi_x - lo_x, hi_y - lo_y) + 1.0;
  lo_x -= pad;
  lo_y -= pad;
  hi_x += pad;
  hi_y += pad;
  const double size = 640.0;
  const double scale = size / std::max(hi_x - lo_x, hi_y - lo_y);
  const auto px = [&](double x) { return (x - lo_x) * scale; };
  const auto py = [&](double y) { return size - (y - lo_y) * scale; };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size
      << "\">\n";
  for (const Neighborhood& nb : instance.vertices) {
    if (nb.shape == Neighborhood::Shape::Ball) {
      out << "  <circle cx=\"" << px(nb.center[0]) << "\" cy=\"" << py(nb.center[1]) << "\" r=\""
          << nb.radius * scale << "\" fill=\"none\" stroke=\"#999\"/>\n";
    } else {
      out << "  <rect x=\"" << px(nb.center[0] - nb.radius) << "\" y=\""
          << py(nb.center[1] + nb.radius) << "\" width=\"" << 2 * nb.radius * scale
          << "\" height=\"" << 2 * nb.radius * scale << "\" fill=\"none\" stroke=\"#999\"/>\n";
    }
    out << "  <circle cx=\"" << px(nb.center[0]) << "\" cy=\"" << py(nb.center[1])
        << "\" r=\"2\" fill=\"#bbb\"/>\n";
  }
  if (!report.points.empty()) {
    for (int e : report.tree_edges) {
      const auto& [v, w] = instance.edges[e];
      out << "  <line x1=\"" << px(report.points[v][0]) << "\" y1=\"" << py(report.points[v][1])
          << "\" x2=\"" << px(report.points[w][0]) << "\" y2=\"" << py(report.points[w][1])
          << "\" stroke=\"#c33\" stroke-width=\"2\"/>\n";
    }
    for (const Point& p : report.points) {
      out << "  <circle cx=\"" << px(p[0]) << "\" cy=\"" << py(p[1])
          << "\" r=\"3.5\" fill=\"#c33\"/>\n";
    }
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace mstn
