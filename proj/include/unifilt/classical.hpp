#pragma once

#include <span>
#include <vector>

#include "unifilt/image.hpp"

namespace unifilt {

/// Fixed unsharp-mask blur: 13x13 Gaussian, sigma 5.
inline constexpr int kSharpenKernelSide = 13;
inline constexpr double kSharpenSigma = 5.0;

inline constexpr int kDefaultDarkChannelWindow = 15;
inline constexpr double kDefaultTransmissionFloor = 0.1;
inline constexpr double kAtmosphericLightFloor = 0.05;
/// Fraction of pixels (ranked by dark channel) used for atmospheric light.
inline constexpr double kAtmosphericLightFraction = 0.001;

struct DefogContext {
  Rgb atmospheric_light{1.0, 1.0, 1.0};
  int dark_channel_window = kDefaultDarkChannelWindow;
  double transmission_floor = kDefaultTransmissionFloor;

  void validate() const;
};

Image gamma_filter(const Image& image, double gamma);
Image white_balance(const Image& image, const Rgb& gains);
Image contrast_filter(const Image& image, double alpha);
/// Piecewise-linear tone curve with slopes t_j / sum(t) on [j/L, (j+1)/L].
Image tone_filter(const Image& image, std::span<const double> slopes);
Image sharpen_filter(const Image& image, double lambda);
Rgb estimate_atmospheric_light(const Image& image, int window = kDefaultDarkChannelWindow);
Image defog_filter(const Image& image, double omega, const DefogContext& ctx);

/// min_c min_{y in window(x)} I^c(y) / A^c. `argmin` (optional) receives the
/// flat value index (pixel * 3 + channel) attaining each minimum.
Plane normalized_dark_channel(const Image& image, const Rgb& atmospheric_light, int window,
                              std::vector<std::size_t>* argmin = nullptr);

/// Gaussian blur used by the sharpen filter (separable, clamp-to-edge).
Image sharpen_blur(const Image& image);

/// Pre-clamp forward passes. The public filters are clamp01(raw::...).
namespace raw {

Image gamma(const Image& image, double gamma);
Image white_balance(const Image& image, const Rgb& gains);
Image contrast(const Image& image, double alpha);
Image tone(const Image& image, std::span<const double> slopes);
Image sharpen(const Image& image, double lambda);
Image defog(const Image& image, double omega, const DefogContext& ctx);

/// 0.5 * (1 - cos(pi * l)) / l, the S-curve gain; 0 at l = 0.
double contrast_gain(double lum);
/// Transmission max(1 - omega * dark, floor).
inline double transmission(double omega, double dark, double floor) {
  const double t = 1.0 - omega * dark;
  return t < floor ? floor : t;
}

}  // namespace raw

}  // namespace unifilt
