#include <cmath>
#include <stdexcept>

#include "unifilt/detail/bpw_curve.hpp"
#include "unifilt/detail/derivatives.hpp"
#include "unifilt/detail/parallel.hpp"

namespace unifilt::detail {

namespace {

using Dual4 = Dual<4>;

// Segment table of channel c with the channel's four parameters as tangent
// lanes (theta1, r1, theta2, r2).
SegmentTable<Dual4> dual_segments(std::span<const double> params, int c, int segments) {
  return build_segments<Dual4>(Dual4::variable(params[4 * c], 0),
                               Dual4::variable(params[4 * c + 1], 1),
                               Dual4::variable(params[4 * c + 2], 2),
                               Dual4::variable(params[4 * c + 3], 3), segments);
}

// Shifted sample I(y - dy, x - dx, c) with clamp-to-edge borders.
double shifted(const Image& img, int y, int x, int c, int dy, int dx) {
  const int sy = std::clamp(y - dy, 0, img.height() - 1);
  const int sx = std::clamp(x - dx, 0, img.width() - 1);
  return img.at(sy, sx, c);
}

}  // namespace

Image unified_param_jvp(const FilterId& filter, const Image& input,
                        std::span<const double> params, std::span<const double> direction) {
  switch (filter.kind) {
    case FilterKind::bpw: {
      Image out(input.height(), input.width());
      auto o = out.values();
      const auto v = input.values();
      for (int c = 0; c < kChannels; ++c) {
        const auto table = dual_segments(params, c, filter.segments);
        const auto n = static_cast<std::ptrdiff_t>(input.pixel_count());
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t p = 0; p < n; ++p) {
          const Dual4 mapped = map_through(table, v[3 * p + c]);
          double d = 0.0;
          for (int k = 0; k < 4; ++k) d += mapped.grad[k] * direction[4 * c + k];
          o[3 * p + c] = d;
        }
      }
      return out;
    }
    case FilterKind::kbl: {
      const KblParams dir = KblParams::from_vector(direction, filter.ksize);
      const Image c1 = convolve2d(input, dir.k1);
      const Image c2 = convolve2d(input, dir.k2);
      Image out(input.height(), input.width());
      auto o = out.values();
      const auto v = input.values();
      const auto a = c1.values();
      const auto b = c2.values();
      for (std::size_t i = 0; i < o.size(); ++i) o[i] = v[i] * a[i] + b[i];
      return out;
    }
    default:
      throw std::logic_error("unified_param_jvp: unsupported filter");
  }
}

std::vector<double> unified_param_vjp(const FilterId& filter, const Image& input,
                                      std::span<const double> params, const Image& upstream) {
  const auto u = upstream.values();
  const auto v = input.values();
  switch (filter.kind) {
    case FilterKind::bpw: {
      std::vector<double> grad(kBpwParamCount, 0.0);
      for (int c = 0; c < kChannels; ++c) {
        const auto table = dual_segments(params, c, filter.segments);
        const auto part = blocked_sum(input.pixel_count(), 4, [&](std::size_t p, double* acc) {
          const double up = u[3 * p + c];
          if (up == 0.0) return;
          const Dual4 mapped = map_through(table, v[3 * p + c]);
          for (int k = 0; k < 4; ++k) acc[k] += up * mapped.grad[k];
        });
        for (int k = 0; k < 4; ++k) grad[4 * c + k] = part[k];
      }
      return grad;
    }
    case FilterKind::kbl: {
      // One serial sum per (channel, kernel offset): deterministic under any
      // thread count.
      const int side = filter.ksize;
      const int r = side / 2;
      const int h = input.height();
      const int w = input.width();
      const std::size_t per_kernel = static_cast<std::size_t>(side) * side;
      std::vector<double> grad(2 * per_kernel * kChannels, 0.0);
      const auto tasks = static_cast<std::ptrdiff_t>(per_kernel * kChannels);
#pragma omp parallel for schedule(dynamic)
      for (std::ptrdiff_t task = 0; task < tasks; ++task) {
        const int c = static_cast<int>(task / static_cast<std::ptrdiff_t>(per_kernel));
        const int o = static_cast<int>(task % static_cast<std::ptrdiff_t>(per_kernel));
        const int dy = o / side - r;
        const int dx = o % side - r;
        double g1 = 0.0;
        double g2 = 0.0;
        for (int y = 0; y < h; ++y) {
          for (int x = 0; x < w; ++x) {
            const double up = upstream.at(y, x, c);
            if (up == 0.0) continue;
            const double s = shifted(input, y, x, c, dy, dx);
            g1 += up * input.at(y, x, c) * s;
            g2 += up * s;
          }
        }
        grad[2 * per_kernel * c + o] = g1;
        grad[2 * per_kernel * c + per_kernel + o] = g2;
      }
      return grad;
    }
    default:
      throw std::logic_error("unified_param_vjp: unsupported filter");
  }
}

Image unified_input_jvp(const FilterId& filter, const Image& input,
                        std::span<const double> params, const Image& tangent) {
  const auto v = input.values();
  const auto dv = tangent.values();
  Image out(input.height(), input.width());
  auto o = out.values();
  switch (filter.kind) {
    case FilterKind::bpw: {
      for (int c = 0; c < kChannels; ++c) {
        const auto table = build_segments<double>(params[4 * c], params[4 * c + 1],
                                                  params[4 * c + 2], params[4 * c + 3],
                                                  filter.segments);
        for (std::size_t p = 0; p < input.pixel_count(); ++p) {
          const std::size_t i = 3 * p + c;
          const int k = find_segment(table.x_value, v[i]);
          o[i] = (k >= 0 && k < table.segments()) ? table.slope[k] * dv[i] : 0.0;
        }
      }
      return out;
    }
    case FilterKind::kbl: {
      const KblParams k = KblParams::from_vector(params, filter.ksize);
      const Image a = convolve2d(input, k.k1);
      const Image da = convolve2d(tangent, k.k1);
      const Image db = convolve2d(tangent, k.k2);
      const auto av = a.values();
      const auto dav = da.values();
      const auto dbv = db.values();
      for (std::size_t i = 0; i < o.size(); ++i) {
        o[i] = dv[i] * av[i] + v[i] * dav[i] + dbv[i] + dv[i];
      }
      return out;
    }
    default:
      throw std::logic_error("unified_input_jvp: unsupported filter");
  }
}

std::vector<char> unified_kink_mask(const FilterId& filter, const Image& input,
                                    std::span<const double> params, double margin) {
  const auto v = input.values();
  std::vector<char> mask(v.size(), 0);
  if (filter.kind != FilterKind::bpw) return mask;
  for (int c = 0; c < kChannels; ++c) {
    const auto table = build_segments<double>(params[4 * c], params[4 * c + 1],
                                              params[4 * c + 2], params[4 * c + 3],
                                              filter.segments);
    for (std::size_t p = 0; p < input.pixel_count(); ++p) {
      const double x = v[3 * p + c];
      for (double knot : table.x_value) {
        if (std::abs(x - knot) <= margin) {
          mask[3 * p + c] = 1;
          break;
        }
      }
    }
  }
  return mask;
}

}  // namespace unifilt::detail
