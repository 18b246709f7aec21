#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "unifilt/degrade.hpp"
#include "unifilt/unified.hpp"

namespace unifilt {

struct AugmentSpec {
  std::uint64_t seed = 0;
  /// One interval per BPW parameter (channel-major: theta1, r1, theta2, r2).
  std::vector<Interval> box = std::vector<Interval>(kBpwParamCount, Interval{-1.0, 1.0});
  int segments = kDefaultBpwSegments;

  void validate() const;
};

/// full: all of [-1, 1]^12. low_light: both control points below the
/// diagonal. fog: p1 near the top of the y axis and p2 partway down the
/// diagonal, so the curve jumps up, stays nearly flat through the midtones
/// and only then climbs to 1. neutral: the identity.
std::vector<std::string> augment_box_names();
std::vector<Interval> augment_box(std::string_view name);

std::vector<double> sample_augment_params(const AugmentSpec& spec);
Image bpw_augment(const Image& image, const AugmentSpec& spec);

}  // namespace unifilt
