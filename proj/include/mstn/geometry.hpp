#pragma once

#include <string>
#include <vector>

namespace mstn {

// A point in R^d. Length must match the instance dimension.
using Point = std::vector<double>;

enum class Norm { L1, L2, LInf };

std::string to_string(Norm n);
Norm norm_from_string(const std::string& s);

// ||a - b|| under the given norm. Dimensions must agree.
double distance(const Point& a, const Point& b, Norm norm);

// Convex region a vertex may move in. Ball is Euclidean; Box is the set
// {z : |z_k - c_k| <= r for all k} (r = half-width). radius 0 degenerates
// to the singleton {center}.
struct Neighborhood {
  enum class Shape { Ball, Box };

  Shape shape = Shape::Ball;
  Point center;
  double radius = 0.0;

  static Neighborhood ball(Point center, double radius);
  static Neighborhood box(Point center, double half_width);

  int dimension() const { return static_cast<int>(center.size()); }

  // Distance from p to the set under L2 (0 when inside).
  double membership_gap(const Point& p) const;
  bool contains(const Point& p, double tol = 1e-12) const;
};

// Euclidean projection of p onto N. Total function.
Point project(const Point& p, const Neighborhood& n);

// Min/max attainable length of an edge whose endpoints range over two
// neighborhoods. lower == 0 exactly when the neighborhoods intersect.
struct EdgeBounds {
  double lower = 0.0;
  double upper = 0.0;
};

// Supported combinations: Ball/Ball under L2, Box/Box under any norm.
// Anything else throws CapabilityError.
EdgeBounds pair_bounds(const Neighborhood& a, const Neighborhood& b, Norm norm);

}  // namespace mstn
