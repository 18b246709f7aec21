#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include "unifilt/dual.hpp"

namespace unifilt::detail {

inline constexpr double kSegmentEpsilon = 1e-8;

template <typename T>
struct CurvePoint {
  T x;
  T y;
};

template <typename T>
std::pair<CurvePoint<T>, CurvePoint<T>> control_points(const T& theta1, const T& r1,
                                                       const T& theta2, const T& r2) {
  using std::cos;
  using std::sin;
  constexpr double quarter_pi = std::numbers::pi / 4.0;
  const T a1 = (theta1 + 1.0) * quarter_pi;
  const T s1 = (r1 + 1.0) * 0.5;
  const T a2 = (theta2 + 1.0) * quarter_pi;
  const T s2 = (r2 + 1.0) * 0.5;
  return {CurvePoint<T>{s1 * cos(a1), s1 * sin(a1)},
          CurvePoint<T>{1.0 - s2 * cos(a2), 1.0 - s2 * sin(a2)}};
}

template <typename T>
CurvePoint<T> bezier(double q, const CurvePoint<T>& p1, const CurvePoint<T>& p2) {
  const double u = 1.0 - q;
  const double b1 = 3.0 * q * u * u;
  const double b2 = 3.0 * q * q * u;
  const double b3 = q * q * q;
  return {b1 * p1.x + b2 * p2.x + b3, b1 * p1.y + b2 * p2.y + b3};
}

/// Knots of the piecewise-linear approximation sampled at q_j = j/L.
template <typename T>
struct SegmentTable {
  std::vector<T> x;
  std::vector<T> y;
  std::vector<T> slope;
  std::vector<double> x_value;

  int segments() const { return static_cast<int>(slope.size()); }
};

template <typename T>
SegmentTable<T> build_segments(const T& theta1, const T& r1, const T& theta2, const T& r2,
                               int segments) {
  const auto [p1, p2] = control_points(theta1, r1, theta2, r2);
  SegmentTable<T> table;
  table.x.reserve(segments + 1);
  table.y.reserve(segments + 1);
  for (int j = 0; j <= segments; ++j) {
    const double q = static_cast<double>(j) / segments;
    const CurvePoint<T> c = bezier(q, p1, p2);
    table.x.push_back(c.x);
    table.y.push_back(c.y);
    table.x_value.push_back(value_of(c.x));
  }
  for (int j = 0; j < segments; ++j) {
    const T dx = table.x[j + 1] - table.x[j];
    const T dy = table.y[j + 1] - table.y[j];
    table.slope.push_back(value_of(dx) < kSegmentEpsilon ? dy / kSegmentEpsilon : dy / dx);
  }
  return table;
}

/// Segment k with x_k <= v < x_{k+1}; -1 below the first knot, L at or past
/// the last knot.
inline int find_segment(const std::vector<double>& knots, double v) {
  const int last = static_cast<int>(knots.size()) - 1;
  if (v < knots.front()) return -1;
  if (v >= knots.back()) return last;
  const auto it = std::upper_bound(knots.begin(), knots.end(), v);
  return std::min(static_cast<int>(it - knots.begin()) - 1, last - 1);
}

/// Cumulative form of sum_j clip(v - x_j, 0, dx_j) * slope_j: the knot
/// values y_k are exact curve samples, so 0 -> 0 and 1 -> 1 hold exactly.
template <typename T>
T map_through(const SegmentTable<T>& table, double v) {
  const int k = find_segment(table.x_value, v);
  if (k < 0) return table.y.front();
  if (k >= table.segments()) return table.y.back();
  T out = table.y[k] + (v - table.x[k]) * table.slope[k];
  if (value_of(out) > value_of(table.y[k + 1])) return table.y[k + 1];
  return out;
}

}  // namespace unifilt::detail
