#include "mstn/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "mstn/errors.hpp"

namespace mstn {

namespace {

void check_same_dimension(std::size_t a, std::size_t b, const char* where) {
  if (a != b) {
    throw UsageError(std::string(where) + ": dimension mismatch (" + std::to_string(a) +
                     " vs " + std::to_string(b) + ")");
  }
}

}  // namespace

std::string to_string(Norm n) {
  switch (n) {
    case Norm::L1: return "L1";
    case Norm::L2: return "L2";
    case Norm::LInf: return "Linf";
  }
  return "L2";
}

Norm norm_from_string(const std::string& s) {
  if (s == "L1" || s == "l1") return Norm::L1;
  if (s == "L2" || s == "l2") return Norm::L2;
  if (s == "Linf" || s == "LInf" || s == "linf") return Norm::LInf;
  throw ValidationError("unknown norm '" + s + "' (expected L1, L2 or Linf)");
}

double distance(const Point& a, const Point& b, Norm norm) {
  check_same_dimension(a.size(), b.size(), "distance");
  double acc = 0.0;
  switch (norm) {
    case Norm::L1:
      for (std::size_t k = 0; k < a.size(); ++k) acc += std::abs(a[k] - b[k]);
      return acc;
    case Norm::L2:
      for (std::size_t k = 0; k < a.size(); ++k) {
        const double dk = a[k] - b[k];
        acc += dk * dk;
      }
      return std::sqrt(acc);
    case Norm::LInf:
      for (std::size_t k = 0; k < a.size(); ++k) acc = std::max(acc, std::abs(a[k] - b[k]));
      return acc;
  }
  return acc;
}

Neighborhood Neighborhood::ball(Point center, double radius) {
  if (radius < 0.0 || !std::isfinite(radius)) throw UsageError("ball: radius must be finite and >= 0");
  Neighborhood n;
  n.shape = Shape::Ball;
  n.center = std::move(center);
  n.radius = radius;
  return n;
}

Neighborhood Neighborhood::box(Point center, double half_width) {
  if (half_width < 0.0 || !std::isfinite(half_width)) {
    throw UsageError("box: half_width must be finite and >= 0");
  }
  Neighborhood n;
  n.shape = Shape::Box;
  n.center = std::move(center);
  n.radius = half_width;
  return n;
}

double Neighborhood::membership_gap(const Point& p) const {
  check_same_dimension(p.size(), center.size(), "membership_gap");
  if (shape == Shape::Ball) {
    double d2 = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
      const double dk = p[k] - center[k];
      d2 += dk * dk;
    }
    return std::max(0.0, std::sqrt(d2) - radius);
  }
  // Box: Euclidean distance to the clamped point.
  double d2 = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double lo = center[k] - radius;
    const double hi = center[k] + radius;
    const double excess = p[k] < lo ? lo - p[k] : (p[k] > hi ? p[k] - hi : 0.0);
    d2 += excess * excess;
  }
  return std::sqrt(d2);
}

bool Neighborhood::contains(const Point& p, double tol) const {
  return membership_gap(p) <= tol;
}

Point project(const Point& p, const Neighborhood& n) {
  check_same_dimension(p.size(), n.center.size(), "project");
  if (n.shape == Neighborhood::Shape::Box) {
    Point q(p.size());
    for (std::size_t k = 0; k < p.size(); ++k) {
      q[k] = std::clamp(p[k], n.center[k] - n.radius, n.center[k] + n.radius);
    }
    return q;
  }
  double d2 = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double dk = p[k] - n.center[k];
    d2 += dk * dk;
  }
  const double d = std::sqrt(d2);
  if (d <= n.radius) return p;
  Point q(p.size());
  const double scale = n.radius / d;
  for (std::size_t k = 0; k < p.size(); ++k) {
    q[k] = n.center[k] + scale * (p[k] - n.center[k]);
  }
  return q;
}

EdgeBounds pair_bounds(const Neighborhood& a, const Neighborhood& b, Norm norm) {
  check_same_dimension(a.center.size(), b.center.size(), "pair_bounds");
  using Shape = Neighborhood::Shape;

  if (a.shape == Shape::Ball && b.shape == Shape::Ball) {
    if (norm != Norm::L2) {
      throw CapabilityError("pair_bounds: ball neighborhoods are supported under L2 only");
    }
    const double dc = distance(a.center, b.center, Norm::L2);
    EdgeBounds eb;
    eb.lower = std::max(0.0, dc - a.radius - b.radius);
    eb.upper = dc + a.radius + b.radius;
    return eb;
  }

  if (a.shape == Shape::Box && b.shape == Shape::Box) {
    // Coordinatewise: the difference vector ranges over a box around the
    // center difference, so min/max compose through any monotone norm.
    const std::size_t d = a.center.size();
    Point gap(d), diam(d);
    for (std::size_t k = 0; k < d; ++k) {
      const double dk = std::abs(a.center[k] - b.center[k]);
      gap[k] = std::max(0.0, dk - a.radius - b.radius);
      diam[k] = dk + a.radius + b.radius;
    }
    const Point zero(d, 0.0);
    EdgeBounds eb;
    eb.lower = distance(gap, zero, norm);
    eb.upper = distance(diam, zero, norm);
    return eb;
  }

  throw CapabilityError("pair_bounds: unsupported shape combination (ball/box mix)");
}

}  // namespace mstn
