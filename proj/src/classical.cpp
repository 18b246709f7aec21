#include "unifilt/classical.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace unifilt {

void DefogContext::validate() const {
  for (double a : atmospheric_light) {
    if (!(a > 0.0 && a <= 1.0)) {
      throw std::invalid_argument("atmospheric light components must lie in (0,1]");
    }
  }
  if (dark_channel_window < 1 || dark_channel_window % 2 == 0) {
    throw std::invalid_argument("dark channel window must be a positive odd integer");
  }
  if (!(transmission_floor > 0.0 && transmission_floor <= 0.5)) {
    throw std::invalid_argument("transmission floor must lie in (0, 0.5]");
  }
}

namespace raw {

Image gamma(const Image& image, double gamma) {
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
  Image out = image;
  for (double& v : out.values()) v = v > 0.0 ? std::pow(v, gamma) : 0.0;
  return out;
}

Image white_balance(const Image& image, const Rgb& gains) {
  for (double g : gains) {
    if (g < 0.0) throw std::invalid_argument("white balance gains must be non-negative");
  }
  Image out = image;
  auto v = out.values();
  for (std::size_t i = 0; i < v.size(); ++i) v[i] *= gains[i % kChannels];
  return out;
}

double contrast_gain(double lum) {
  if (lum <= 0.0) return 0.0;
  return 0.5 * (1.0 - std::cos(std::numbers::pi * lum)) / lum;
}

Image contrast(const Image& image, double alpha) {
  Image out = image;
  auto v = out.values();
  const auto n = static_cast<std::ptrdiff_t>(image.pixel_count());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t p = 0; p < n; ++p) {
    double* px = v.data() + 3 * p;
    const double lum = luminance(Rgb{px[0], px[1], px[2]});
    if (lum == 0.0) continue;
    const double gain = contrast_gain(lum);
    for (int c = 0; c < kChannels; ++c) {
      px[c] = alpha * px[c] * gain + (1.0 - alpha) * px[c];
    }
  }
  return out;
}

Image tone(const Image& image, std::span<const double> slopes) {
  if (slopes.empty()) throw std::invalid_argument("tone filter needs at least one slope");
  for (double t : slopes) {
    if (!(t > 0.0)) throw std::invalid_argument("tone slopes must be positive");
  }
  const double total = std::accumulate(slopes.begin(), slopes.end(), 0.0);
  const int segments = static_cast<int>(slopes.size());
  Image out = image;
  auto v = out.values();
  const auto n = static_cast<std::ptrdiff_t>(v.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const double scaled = segments * v[i];
    double acc = 0.0;
    for (int j = 0; j < segments; ++j) {
      acc += std::clamp(scaled - j, 0.0, 1.0) * slopes[j];
    }
    v[i] = acc / total;
  }
  return out;
}

Image sharpen(const Image& image, double lambda) {
  const Image blurred = sharpen_blur(image);
  Image out = image;
  auto v = out.values();
  const auto b = blurred.values();
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = v[i] + lambda * (v[i] - b[i]);
  return out;
}

Image defog(const Image& image, double omega, const DefogContext& ctx) {
  ctx.validate();
  const Rgb& a = ctx.atmospheric_light;
  const Plane dark = normalized_dark_channel(image, a, ctx.dark_channel_window);
  Image out = image;
  auto v = out.values();
  const auto n = static_cast<std::ptrdiff_t>(image.pixel_count());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t p = 0; p < n; ++p) {
    const double inv_t = 1.0 / transmission(omega, dark.values[p], ctx.transmission_floor);
    for (int c = 0; c < kChannels; ++c) {
      double& x = v[3 * p + c];
      x = x * inv_t - a[c] * inv_t + a[c];
    }
  }
  return out;
}

}  // namespace raw

Image gamma_filter(const Image& image, double gamma) { return clamp01(raw::gamma(image, gamma)); }

Image white_balance(const Image& image, const Rgb& gains) {
  return clamp01(raw::white_balance(image, gains));
}

Image contrast_filter(const Image& image, double alpha) {
  return clamp01(raw::contrast(image, alpha));
}

Image tone_filter(const Image& image, std::span<const double> slopes) {
  return clamp01(raw::tone(image, slopes));
}

Image sharpen_filter(const Image& image, double lambda) {
  return clamp01(raw::sharpen(image, lambda));
}

Image defog_filter(const Image& image, double omega, const DefogContext& ctx) {
  return clamp01(raw::defog(image, omega, ctx));
}

Image sharpen_blur(const Image& image) {
  static const std::vector<double> taps = gaussian_taps(kSharpenKernelSide, kSharpenSigma);
  return convolve_separable(image, taps);
}

Plane normalized_dark_channel(const Image& image, const Rgb& atmospheric_light, int window,
                              std::vector<std::size_t>* argmin) {
  Plane per_pixel(image.height(), image.width());
  std::vector<int> channel_of(image.pixel_count());
  for (std::size_t p = 0; p < image.pixel_count(); ++p) {
    int best = 0;
    double best_v = image.values()[3 * p] / atmospheric_light[0];
    for (int c = 1; c < kChannels; ++c) {
      const double v = image.values()[3 * p + c] / atmospheric_light[c];
      if (v < best_v) {
        best_v = v;
        best = c;
      }
    }
    per_pixel.values[p] = best_v;
    channel_of[p] = best;
  }
  std::vector<std::size_t> pixel_arg;
  Plane out = window_min(per_pixel, window, argmin != nullptr ? &pixel_arg : nullptr);
  if (argmin != nullptr) {
    argmin->resize(pixel_arg.size());
    for (std::size_t p = 0; p < pixel_arg.size(); ++p) {
      (*argmin)[p] = pixel_arg[p] * kChannels + channel_of[pixel_arg[p]];
    }
  }
  return out;
}

Rgb estimate_atmospheric_light(const Image& image, int window) {
  const Plane dark = normalized_dark_channel(image, {1.0, 1.0, 1.0}, window);
  const std::size_t n = dark.values.size();
  const auto count = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::floor(kAtmosphericLightFraction * static_cast<double>(n))));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(count), order.end(),
                    [&](std::size_t a, std::size_t b) {
                      if (dark.values[a] != dark.values[b]) return dark.values[a] > dark.values[b];
                      return a < b;
                    });
  Rgb light{0.0, 0.0, 0.0};
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t p = order[k];
    for (int c = 0; c < kChannels; ++c) {
      light[c] = std::max(light[c], image.values()[3 * p + c]);
    }
  }
  for (double& a : light) a = std::max(a, kAtmosphericLightFloor);
  return light;
}

}  // namespace unifilt
