#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qvs {

// A point in problem coordinates. Dimension is coords.size(); all campaign
// and kernel code treats coordinates as plain Euclidean.
struct Point {
  std::vector<double> coords;

  Point() = default;
  explicit Point(std::vector<double> c) : coords(std::move(c)) {}
  Point(std::initializer_list<double> c) : coords(c) {}

  std::size_t dim() const { return coords.size(); }
  double operator[](std::size_t i) const { return coords[i]; }
  double& operator[](std::size_t i) { return coords[i]; }

  bool operator==(const Point& other) const { return coords == other.coords; }
};

inline bool point_is_finite(const Point& p) {
  for (double c : p.coords) {
    if (!std::isfinite(c)) return false;
  }
  return true;
}

inline void require_valid_point(const Point& p, const char* where) {
  if (p.dim() == 0) {
    throw std::invalid_argument(std::string(where) + ": zero-dimensional point");
  }
  if (!point_is_finite(p)) {
    throw std::invalid_argument(std::string(where) + ": non-finite coordinate");
  }
}

inline double squared_distance(const Point& a, const Point& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.coords.size(); ++i) {
    const double d = a.coords[i] - b.coords[i];
    s += d * d;
  }
  return s;
}

inline double distance(const Point& a, const Point& b) {
  return std::sqrt(squared_distance(a, b));
}

// Axis-aligned box, lower < upper elementwise.
struct BoxDomain {
  std::vector<double> lower;
  std::vector<double> upper;

  BoxDomain() = default;
  BoxDomain(std::vector<double> lo, std::vector<double> hi)
      : lower(std::move(lo)), upper(std::move(hi)) {}

  // Cube [-half, half]^d.
  static BoxDomain centered_cube(std::size_t dim, double half) {
    return BoxDomain(std::vector<double>(dim, -half), std::vector<double>(dim, half));
  }

  std::size_t dim() const { return lower.size(); }

  void validate() const {
    if (lower.empty() || lower.size() != upper.size()) {
      throw std::invalid_argument("BoxDomain: bounds must be nonempty and equal length");
    }
    for (std::size_t i = 0; i < lower.size(); ++i) {
      if (!std::isfinite(lower[i]) || !std::isfinite(upper[i]) || !(lower[i] < upper[i])) {
        throw std::invalid_argument("BoxDomain: requires finite lower < upper per axis");
      }
    }
  }

  bool contains(const Point& p, double slack = 0.0) const {
    if (p.dim() != dim()) return false;
    for (std::size_t i = 0; i < lower.size(); ++i) {
      if (p[i] < lower[i] - slack || p[i] > upper[i] + slack) return false;
    }
    return true;
  }

  Point clamp(Point p) const {
    for (std::size_t i = 0; i < lower.size(); ++i) {
      if (p[i] < lower[i]) p[i] = lower[i];
      if (p[i] > upper[i]) p[i] = upper[i];
    }
    return p;
  }
};

}  // namespace qvs
