#pragma once

#include <array>
#include <span>
#include <utility>
#include <vector>

#include "unifilt/image.hpp"

namespace unifilt {

inline constexpr int kDefaultBpwSegments = 8;
inline constexpr int kDefaultKblKernelSide = 9;
inline constexpr int kBpwParamCount = 12;

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Polar parameterization of the two inner control points of one channel's
/// curve. All four values lie in [-1, 1]; zeros give the identity line.
struct BpwChannel {
  double theta1 = 0.0;
  double r1 = 0.0;
  double theta2 = 0.0;
  double r2 = 0.0;
};

struct BpwParams {
  std::array<BpwChannel, 3> channels{};
  int segments = kDefaultBpwSegments;

  /// Flat layout: (theta1, r1, theta2, r2) for R, then G, then B.
  static BpwParams from_vector(std::span<const double> values,
                               int segments = kDefaultBpwSegments);
  std::vector<double> to_vector() const;
  void validate() const;
};

std::pair<Point2, Point2> bpw_control_points(double theta1, double r1, double theta2, double r2);

/// Cubic Bezier from (0,0) to (1,1) with inner control points p1, p2.
Point2 bezier_point(double q, Point2 p1, Point2 p2);

/// Per-channel monotone tone curve: the Bezier curve sampled at q_j = j/L and
/// evaluated as a piecewise-linear map.
Image bpw_filter(const Image& image, const BpwParams& params);

/// Per-channel kernel pair. Every weight is constrained to [-1, 1].
struct KblParams {
  std::array<Kernel, 3> k1;
  std::array<Kernel, 3> k2;

  static KblParams zeros(int ksize = kDefaultKblKernelSide);
  /// Flat layout: per channel (R, G, B), K1 row-major then K2 row-major.
  static KblParams from_vector(std::span<const double> values,
                               int ksize = kDefaultKblKernelSide);
  std::vector<double> to_vector() const;
  int ksize() const { return k1[0].side(); }
  void validate() const;
};

/// F = I * conv(I, K1) + conv(I, K2) + I per channel, clamped to [0,1].
Image kbl_filter(const Image& image, const KblParams& params);

namespace raw {

Image bpw(const Image& image, const BpwParams& params);
/// Pre-clamp locally linear operator; kernels are not range-checked.
Image kbl(const Image& image, const std::array<Kernel, 3>& k1, const std::array<Kernel, 3>& k2);

}  // namespace raw

}  // namespace unifilt
