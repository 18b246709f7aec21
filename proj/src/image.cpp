#include "unifilt/image.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace unifilt {

namespace {

void check_dims(int height, int width) {
  if (height < 1 || width < 1) {
    throw std::invalid_argument("image dimensions must be positive, got " +
                                std::to_string(height) + "x" + std::to_string(width));
  }
}

void check_side(int side) {
  if (side < 1 || side % 2 == 0) {
    throw std::invalid_argument("kernel side must be a positive odd integer, got " +
                                std::to_string(side));
  }
}

// Clamp-to-edge index table: table[i] = clamp(i - pad, 0, n - 1) for
// i in [0, n + 2 * pad).
std::vector<int> edge_table(int n, int pad) {
  std::vector<int> table(static_cast<std::size_t>(n) + 2 * pad);
  for (int i = 0; i < static_cast<int>(table.size()); ++i) {
    table[i] = std::clamp(i - pad, 0, n - 1);
  }
  return table;
}

}  // namespace

Image::Image(int height, int width, double fill)
    : height_(height), width_(width) {
  check_dims(height, width);
  values_.assign(static_cast<std::size_t>(height) * width * kChannels, fill);
}

Image::Image(int height, int width, std::vector<double> values)
    : height_(height), width_(width), values_(std::move(values)) {
  check_dims(height, width);
  if (values_.size() != static_cast<std::size_t>(height) * width * kChannels) {
    throw std::invalid_argument("image data length does not match height*width*3");
  }
}

Rgb Image::pixel(int y, int x) const {
  const std::size_t i = index(y, x, 0);
  return {values_[i], values_[i + 1], values_[i + 2]};
}

void Image::set_pixel(int y, int x, const Rgb& rgb) {
  const std::size_t i = index(y, x, 0);
  values_[i] = rgb[0];
  values_[i + 1] = rgb[1];
  values_[i + 2] = rgb[2];
}

Kernel::Kernel(int side, double fill) : side_(side) {
  check_side(side);
  weights_.assign(static_cast<std::size_t>(side) * side, fill);
}

Kernel::Kernel(int side, std::vector<double> weights)
    : side_(side), weights_(std::move(weights)) {
  check_side(side);
  if (weights_.size() != static_cast<std::size_t>(side) * side) {
    throw std::invalid_argument("kernel weight count does not match side*side");
  }
}

Kernel Kernel::delta(int side) {
  Kernel k(side);
  k.at(0, 0) = 1.0;
  return k;
}

Kernel Kernel::gaussian(int side, double sigma) {
  const std::vector<double> taps = gaussian_taps(side, sigma);
  Kernel k(side);
  const int r = side / 2;
  for (int dy = -r; dy <= r; ++dy) {
    for (int dx = -r; dx <= r; ++dx) {
      k.at(dy, dx) = taps[dy + r] * taps[dx + r];
    }
  }
  return k;
}

double Kernel::sum() const {
  return std::accumulate(weights_.begin(), weights_.end(), 0.0);
}

std::vector<double> gaussian_taps(int side, double sigma) {
  check_side(side);
  if (!(sigma > 0.0)) {
    throw std::invalid_argument("gaussian sigma must be positive");
  }
  const int r = side / 2;
  std::vector<double> taps(side);
  double total = 0.0;
  for (int i = -r; i <= r; ++i) {
    taps[i + r] = std::exp(-(i * i) / (2.0 * sigma * sigma));
    total += taps[i + r];
  }
  for (double& t : taps) t /= total;
  return taps;
}

double luminance(const Rgb& rgb) {
  return 0.27 * rgb[0] + 0.67 * rgb[1] + 0.06 * rgb[2];
}

Plane luminance(const Image& image) {
  Plane out(image.height(), image.width());
  const auto v = image.values();
  const auto n = static_cast<std::ptrdiff_t>(image.pixel_count());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out.values[i] = 0.27 * v[3 * i] + 0.67 * v[3 * i + 1] + 0.06 * v[3 * i + 2];
  }
  return out;
}

Image clamp01(Image image) {
  for (double& v : image.values()) v = clamp01(v);
  return image;
}

namespace {

template <typename KernelFor>
Image convolve_impl(const Image& image, int side, KernelFor kernel_for) {
  const int h = image.height();
  const int w = image.width();
  const int r = side / 2;
  const std::vector<int> cols = edge_table(w, r);
  Image out(h, w);
  const auto in = image.values();
  auto dst = out.values();

#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) {
    std::vector<double> acc(static_cast<std::size_t>(w) * kChannels, 0.0);
    for (int dy = -r; dy <= r; ++dy) {
      const int sy = std::clamp(y - dy, 0, h - 1);
      const double* row = in.data() + static_cast<std::size_t>(sy) * w * kChannels;
      for (int dx = -r; dx <= r; ++dx) {
        for (int c = 0; c < kChannels; ++c) {
          const double wgt = kernel_for(c).at(dy, dx);
          if (wgt == 0.0) continue;
          for (int x = 0; x < w; ++x) {
            const int sx = cols[x - dx + r];
            acc[static_cast<std::size_t>(x) * kChannels + c] += wgt * row[sx * kChannels + c];
          }
        }
      }
    }
    std::copy(acc.begin(), acc.end(), dst.begin() + static_cast<std::size_t>(y) * w * kChannels);
  }
  return out;
}

}  // namespace

Image convolve2d(const Image& image, const Kernel& kernel) {
  return convolve_impl(image, kernel.side(), [&](int) -> const Kernel& { return kernel; });
}

Image convolve2d(const Image& image, const std::array<Kernel, 3>& kernels) {
  const int side = kernels[0].side();
  if (kernels[1].side() != side || kernels[2].side() != side) {
    throw std::invalid_argument("per-channel kernels must share one side length");
  }
  return convolve_impl(image, side, [&](int c) -> const Kernel& { return kernels[c]; });
}

namespace {

// One separable pass over `channels` interleaved planes. `horizontal` selects
// the axis.
std::vector<double> separable_pass(std::span<const double> in, int h, int w, int channels,
                                   std::span<const double> taps, bool horizontal) {
  const int r = static_cast<int>(taps.size()) / 2;
  std::vector<double> out(in.size(), 0.0);
  const std::vector<int> table = edge_table(horizontal ? w : h, r);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < channels; ++c) {
        double acc = 0.0;
        for (int d = -r; d <= r; ++d) {
          const int sy = horizontal ? y : table[y - d + r];
          const int sx = horizontal ? table[x - d + r] : x;
          acc += taps[d + r] * in[(static_cast<std::size_t>(sy) * w + sx) * channels + c];
        }
        out[(static_cast<std::size_t>(y) * w + x) * channels + c] = acc;
      }
    }
  }
  return out;
}

void check_taps(std::span<const double> taps) {
  if (taps.empty() || taps.size() % 2 == 0) {
    throw std::invalid_argument("separable taps must have odd length");
  }
}

}  // namespace

Image convolve_separable(const Image& image, std::span<const double> taps) {
  check_taps(taps);
  auto tmp = separable_pass(image.values(), image.height(), image.width(), kChannels, taps, true);
  auto out = separable_pass(tmp, image.height(), image.width(), kChannels, taps, false);
  return Image(image.height(), image.width(), std::move(out));
}

Plane convolve_separable(const Plane& plane, std::span<const double> taps) {
  check_taps(taps);
  auto tmp = separable_pass(plane.values, plane.height, plane.width, 1, taps, true);
  Plane out;
  out.height = plane.height;
  out.width = plane.width;
  out.values = separable_pass(tmp, plane.height, plane.width, 1, taps, false);
  return out;
}

Plane window_min(const Plane& plane, int side, std::vector<std::size_t>* argmin) {
  check_side(side);
  const int h = plane.height;
  const int w = plane.width;
  const int r = side / 2;
  const std::size_t n = plane.values.size();

  // Horizontal pass keeps the first minimum in scan order; the vertical pass
  // then keeps the first row holding the overall minimum, which matches a
  // row-major brute-force scan with strict comparisons.
  std::vector<double> hmin(n);
  std::vector<std::size_t> harg(n);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int x0 = std::max(0, x - r);
      const int x1 = std::min(w - 1, x + r);
      std::size_t best = static_cast<std::size_t>(y) * w + x0;
      for (int sx = x0 + 1; sx <= x1; ++sx) {
        const std::size_t i = static_cast<std::size_t>(y) * w + sx;
        if (plane.values[i] < plane.values[best]) best = i;
      }
      hmin[static_cast<std::size_t>(y) * w + x] = plane.values[best];
      harg[static_cast<std::size_t>(y) * w + x] = best;
    }
  }

  Plane out(h, w);
  if (argmin != nullptr) argmin->assign(n, 0);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) {
    const int y0 = std::max(0, y - r);
    const int y1 = std::min(h - 1, y + r);
    for (int x = 0; x < w; ++x) {
      std::size_t best = static_cast<std::size_t>(y0) * w + x;
      for (int sy = y0 + 1; sy <= y1; ++sy) {
        const std::size_t i = static_cast<std::size_t>(sy) * w + x;
        if (hmin[i] < hmin[best]) best = i;
      }
      out.at(y, x) = hmin[best];
      if (argmin != nullptr) (*argmin)[static_cast<std::size_t>(y) * w + x] = harg[best];
    }
  }
  return out;
}

}  // namespace unifilt
