#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace unifilt {

using Rgb = std::array<double, 3>;

inline constexpr int kChannels = 3;

/// H x W x 3 raster of real-valued intensities, interleaved RGB, row-major.
/// Values are nominally in [0,1]; intermediate (pre-clamp) results may leave
/// that range.
class Image {
 public:
  Image(int height, int width, double fill = 0.0);
  Image(int height, int width, std::vector<double> values);

  int height() const { return height_; }
  int width() const { return width_; }
  std::size_t pixel_count() const { return static_cast<std::size_t>(height_) * width_; }
  std::size_t size() const { return values_.size(); }

  double& at(int y, int x, int c) { return values_[index(y, x, c)]; }
  double at(int y, int x, int c) const { return values_[index(y, x, c)]; }
  Rgb pixel(int y, int x) const;
  void set_pixel(int y, int x, const Rgb& rgb);

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  bool same_shape(const Image& other) const {
    return height_ == other.height_ && width_ == other.width_;
  }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  std::size_t index(int y, int x, int c) const {
    return (static_cast<std::size_t>(y) * width_ + x) * kChannels + c;
  }

  int height_;
  int width_;
  std::vector<double> values_;
};

/// Single-channel raster (dark channel, luminance, SSIM maps).
struct Plane {
  int height = 0;
  int width = 0;
  std::vector<double> values;

  Plane() = default;
  Plane(int h, int w, double fill = 0.0)
      : height(h), width(w), values(static_cast<std::size_t>(h) * w, fill) {}

  double& at(int y, int x) { return values[static_cast<std::size_t>(y) * width + x]; }
  double at(int y, int x) const { return values[static_cast<std::size_t>(y) * width + x]; }
};

/// Square convolution kernel with odd side length.
class Kernel {
 public:
  explicit Kernel(int side, double fill = 0.0);
  Kernel(int side, std::vector<double> weights);

  static Kernel delta(int side);
  /// Normalized (unit-sum) Gaussian sampled at integer offsets.
  static Kernel gaussian(int side, double sigma);

  int side() const { return side_; }
  int radius() const { return side_ / 2; }
  /// Weight at offset (dy, dx), both in [-radius, radius].
  double& at(int dy, int dx) { return weights_[index(dy, dx)]; }
  double at(int dy, int dx) const { return weights_[index(dy, dx)]; }

  std::span<double> weights() { return weights_; }
  std::span<const double> weights() const { return weights_; }
  double sum() const;

  friend bool operator==(const Kernel&, const Kernel&) = default;

 private:
  std::size_t index(int dy, int dx) const {
    return static_cast<std::size_t>(dy + radius()) * side_ + (dx + radius());
  }

  int side_;
  std::vector<double> weights_;
};

/// Normalized 1-D Gaussian taps of odd length.
std::vector<double> gaussian_taps(int side, double sigma);

double luminance(const Rgb& rgb);
Plane luminance(const Image& image);

inline double clamp01(double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }
Image clamp01(Image image);

/// out(y,x,c) = sum_{dy,dx} K(dy,dx) * in(y-dy, x-dx, c) with clamp-to-edge
/// borders. No clamping of the result.
Image convolve2d(const Image& image, const Kernel& kernel);
/// Per-channel kernels; kernels[c] filters channel c.
Image convolve2d(const Image& image, const std::array<Kernel, 3>& kernels);
/// Same as convolve2d with the outer-product kernel taps x taps.
Image convolve_separable(const Image& image, std::span<const double> taps);
Plane convolve_separable(const Plane& plane, std::span<const double> taps);

/// Minimum over the side x side window around each pixel (borders replicate).
/// When argmin is non-null it receives the flat index of the chosen pixel.
Plane window_min(const Plane& plane, int side, std::vector<std::size_t>* argmin = nullptr);

}  // namespace unifilt
