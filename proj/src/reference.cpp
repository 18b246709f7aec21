#include "unifilt/reference.hpp"

#include <algorithm>
#include <limits>

namespace unifilt::reference {

Image convolve2d(const Image& image, const std::array<Kernel, 3>& kernels) {
  const int h = image.height();
  const int w = image.width();
  Image out(h, w);
  for (int c = 0; c < kChannels; ++c) {
    const Kernel& k = kernels[c];
    const int r = k.radius();
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        double acc = 0.0;
        for (int dy = -r; dy <= r; ++dy) {
          for (int dx = -r; dx <= r; ++dx) {
            const int sy = std::clamp(y - dy, 0, h - 1);
            const int sx = std::clamp(x - dx, 0, w - 1);
            acc += k.at(dy, dx) * image.at(sy, sx, c);
          }
        }
        out.at(y, x, c) = acc;
      }
    }
  }
  return out;
}

Image convolve2d(const Image& image, const Kernel& kernel) {
  return reference::convolve2d(image, std::array<Kernel, 3>{kernel, kernel, kernel});
}

Plane window_min(const Plane& plane, int side) {
  const int r = side / 2;
  Plane out(plane.height, plane.width);
  for (int y = 0; y < plane.height; ++y) {
    for (int x = 0; x < plane.width; ++x) {
      double best = std::numeric_limits<double>::infinity();
      for (int sy = std::max(0, y - r); sy <= std::min(plane.height - 1, y + r); ++sy) {
        for (int sx = std::max(0, x - r); sx <= std::min(plane.width - 1, x + r); ++sx) {
          best = std::min(best, plane.at(sy, sx));
        }
      }
      out.at(y, x) = best;
    }
  }
  return out;
}

Plane normalized_dark_channel(const Image& image, const Rgb& atmospheric_light, int window) {
  const int r = window / 2;
  Plane out(image.height(), image.width());
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      double best = std::numeric_limits<double>::infinity();
      for (int sy = y - r; sy <= y + r; ++sy) {
        for (int sx = x - r; sx <= x + r; ++sx) {
          const int cy = std::clamp(sy, 0, image.height() - 1);
          const int cx = std::clamp(sx, 0, image.width() - 1);
          for (int c = 0; c < kChannels; ++c) {
            best = std::min(best, image.at(cy, cx, c) / atmospheric_light[c]);
          }
        }
      }
      out.at(y, x) = best;
    }
  }
  return out;
}

Image kbl(const Image& image, const std::array<Kernel, 3>& k1, const std::array<Kernel, 3>& k2) {
  const Image c1 = reference::convolve2d(image, k1);
  const Image c2 = reference::convolve2d(image, k2);
  Image out(image.height(), image.width());
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      for (int c = 0; c < kChannels; ++c) {
        const double i = image.at(y, x, c);
        out.at(y, x, c) = i * c1.at(y, x, c) + c2.at(y, x, c) + i;
      }
    }
  }
  return out;
}

}  // namespace unifilt::reference
