#pragma once

#include <array>

#include "unifilt/image.hpp"

/// Serial, loop-for-loop versions of the parallel kernels. They share no code
/// with the optimized paths and exist for cross-checking and benchmarking.
namespace unifilt::reference {

Image convolve2d(const Image& image, const Kernel& kernel);
Image convolve2d(const Image& image, const std::array<Kernel, 3>& kernels);

/// Brute-force min over the window, first minimum in row-major scan order.
Plane window_min(const Plane& plane, int side);

/// min_c min_{window} I^c / A^c by direct scan.
Plane normalized_dark_channel(const Image& image, const Rgb& atmospheric_light, int window);

Image kbl(const Image& image, const std::array<Kernel, 3>& k1, const std::array<Kernel, 3>& k2);

}  // namespace unifilt::reference
