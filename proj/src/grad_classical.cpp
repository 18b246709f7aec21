#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "unifilt/classical.hpp"
#include "unifilt/detail/derivatives.hpp"
#include "unifilt/detail/parallel.hpp"

namespace unifilt::detail {

namespace {

constexpr double kLuminanceWeights[3] = {0.27, 0.67, 0.06};

// d/dl of raw::contrast_gain.
double contrast_gain_slope(double lum) {
  if (lum <= 0.0) return 0.0;
  const double f = 0.5 * (1.0 - std::cos(std::numbers::pi * lum));
  const double df = 0.5 * std::numbers::pi * std::sin(std::numbers::pi * lum);
  return (df * lum - f) / (lum * lum);
}

double gamma_sensitivity(double v, double gamma) {
  return v > 0.0 ? std::pow(v, gamma) * std::log(v) : 0.0;
}

// Tone curve pieces clip(L*v - j, 0, 1); derivative in v is L on [0, 1).
double tone_piece(double v, int segments, int j) {
  const double s = segments * v - j;
  return s < 0.0 ? 0.0 : (s > 1.0 ? 1.0 : s);
}

struct DefogState {
  DefogContext ctx;
  Plane dark;
  std::vector<std::size_t> argmin;
};

DefogState defog_state(const FilterId& filter, const Image& input) {
  DefogState s{resolve_defog_context(filter, input), {}, {}};
  s.dark = normalized_dark_channel(input, s.ctx.atmospheric_light, s.ctx.dark_channel_window,
                                   &s.argmin);
  return s;
}

bool floored(double omega, double dark, double floor) { return 1.0 - omega * dark < floor; }

// Per-value sensitivity of the pre-clamp output to a scalar parameter of a
// one-parameter filter.
Image scalar_sensitivity(const FilterId& filter, const Image& input,
                         std::span<const double> params) {
  Image out(input.height(), input.width());
  auto o = out.values();
  const auto v = input.values();
  switch (filter.kind) {
    case FilterKind::gamma:
      for (std::size_t i = 0; i < v.size(); ++i) o[i] = gamma_sensitivity(v[i], params[0]);
      break;
    case FilterKind::contrast:
      for (std::size_t p = 0; p < input.pixel_count(); ++p) {
        const double lum = luminance(Rgb{v[3 * p], v[3 * p + 1], v[3 * p + 2]});
        const double gain = raw::contrast_gain(lum);
        for (int c = 0; c < kChannels; ++c) {
          o[3 * p + c] = lum == 0.0 ? 0.0 : v[3 * p + c] * gain - v[3 * p + c];
        }
      }
      break;
    case FilterKind::sharpen: {
      const Image blurred = sharpen_blur(input);
      const auto b = blurred.values();
      for (std::size_t i = 0; i < v.size(); ++i) o[i] = v[i] - b[i];
      break;
    }
    case FilterKind::defog: {
      const DefogState s = defog_state(filter, input);
      const double omega = params[0];
      for (std::size_t p = 0; p < input.pixel_count(); ++p) {
        const double d = s.dark.values[p];
        if (floored(omega, d, s.ctx.transmission_floor)) continue;
        const double t = 1.0 - omega * d;
        for (int c = 0; c < kChannels; ++c) {
          o[3 * p + c] = (v[3 * p + c] - s.ctx.atmospheric_light[c]) * d / (t * t);
        }
      }
      break;
    }
    default:
      throw std::logic_error("scalar_sensitivity: not a one-parameter filter");
  }
  return out;
}

}  // namespace

Image classical_param_jvp(const FilterId& filter, const Image& input,
                          std::span<const double> params, std::span<const double> direction) {
  const auto v = input.values();
  switch (filter.kind) {
    case FilterKind::gamma:
    case FilterKind::contrast:
    case FilterKind::sharpen:
    case FilterKind::defog: {
      Image out = scalar_sensitivity(filter, input, params);
      for (double& x : out.values()) x *= direction[0];
      return out;
    }
    case FilterKind::white_balance: {
      Image out(input.height(), input.width());
      auto o = out.values();
      for (std::size_t i = 0; i < v.size(); ++i) o[i] = direction[i % kChannels] * v[i];
      return out;
    }
    case FilterKind::tone: {
      const int segments = static_cast<int>(params.size());
      const double total = std::accumulate(params.begin(), params.end(), 0.0);
      const double dir_total = std::accumulate(direction.begin(), direction.end(), 0.0);
      Image out(input.height(), input.width());
      auto o = out.values();
      const auto n = static_cast<std::ptrdiff_t>(v.size());
#pragma omp parallel for schedule(static)
      for (std::ptrdiff_t i = 0; i < n; ++i) {
        double mapped = 0.0;
        double along = 0.0;
        for (int j = 0; j < segments; ++j) {
          const double piece = tone_piece(v[i], segments, j);
          mapped += piece * params[j];
          along += piece * direction[j];
        }
        mapped /= total;
        o[i] = (along - mapped * dir_total) / total;
      }
      return out;
    }
    default:
      throw std::logic_error("classical_param_jvp: unsupported filter");
  }
}

std::vector<double> classical_param_vjp(const FilterId& filter, const Image& input,
                                        std::span<const double> params, const Image& upstream) {
  const auto v = input.values();
  const auto u = upstream.values();
  switch (filter.kind) {
    case FilterKind::gamma:
    case FilterKind::contrast:
    case FilterKind::sharpen:
    case FilterKind::defog: {
      const Image s = scalar_sensitivity(filter, input, params);
      const auto sv = s.values();
      return blocked_sum(sv.size(), 1, [&](std::size_t i, double* acc) { acc[0] += u[i] * sv[i]; });
    }
    case FilterKind::white_balance:
      return blocked_sum(input.pixel_count(), 3, [&](std::size_t p, double* acc) {
        for (int c = 0; c < kChannels; ++c) acc[c] += u[3 * p + c] * v[3 * p + c];
      });
    case FilterKind::tone: {
      const int segments = static_cast<int>(params.size());
      const double total = std::accumulate(params.begin(), params.end(), 0.0);
      return blocked_sum(v.size(), params.size(), [&](std::size_t i, double* acc) {
        if (u[i] == 0.0) return;
        double mapped = 0.0;
        for (int j = 0; j < segments; ++j) mapped += tone_piece(v[i], segments, j) * params[j];
        mapped /= total;
        for (int j = 0; j < segments; ++j) {
          acc[j] += u[i] * (tone_piece(v[i], segments, j) - mapped) / total;
        }
      });
    }
    default:
      throw std::logic_error("classical_param_vjp: unsupported filter");
  }
}

Image classical_input_jvp(const FilterId& filter, const Image& input,
                          std::span<const double> params, const Image& tangent) {
  const auto v = input.values();
  const auto dv = tangent.values();
  Image out(input.height(), input.width());
  auto o = out.values();
  switch (filter.kind) {
    case FilterKind::gamma: {
      const double g = params[0];
      for (std::size_t i = 0; i < v.size(); ++i) {
        o[i] = v[i] > 0.0 ? g * std::pow(v[i], g - 1.0) * dv[i] : 0.0;
      }
      return out;
    }
    case FilterKind::white_balance:
      for (std::size_t i = 0; i < v.size(); ++i) o[i] = params[i % kChannels] * dv[i];
      return out;
    case FilterKind::contrast: {
      const double alpha = params[0];
      for (std::size_t p = 0; p < input.pixel_count(); ++p) {
        const double lum = luminance(Rgb{v[3 * p], v[3 * p + 1], v[3 * p + 2]});
        double dlum = 0.0;
        for (int c = 0; c < kChannels; ++c) dlum += kLuminanceWeights[c] * dv[3 * p + c];
        const double gain = raw::contrast_gain(lum);
        const double slope = contrast_gain_slope(lum);
        for (int c = 0; c < kChannels; ++c) {
          const std::size_t i = 3 * p + c;
          o[i] = alpha * (dv[i] * gain + v[i] * slope * dlum) + (1.0 - alpha) * dv[i];
        }
      }
      return out;
    }
    case FilterKind::tone: {
      const int segments = static_cast<int>(params.size());
      const double total = std::accumulate(params.begin(), params.end(), 0.0);
      for (std::size_t i = 0; i < v.size(); ++i) {
        const double s = segments * v[i];
        const int j = static_cast<int>(std::floor(s));
        o[i] = (s >= 0.0 && j < segments) ? segments * params[j] / total * dv[i] : 0.0;
      }
      return out;
    }
    case FilterKind::sharpen: {
      const double lambda = params[0];
      const Image blurred = sharpen_blur(tangent);
      const auto b = blurred.values();
      for (std::size_t i = 0; i < v.size(); ++i) o[i] = dv[i] + lambda * (dv[i] - b[i]);
      return out;
    }
    case FilterKind::defog: {
      const DefogState s = defog_state(filter, input);
      const double omega = params[0];
      const Rgb& a = s.ctx.atmospheric_light;
      for (std::size_t p = 0; p < input.pixel_count(); ++p) {
        const double d = s.dark.values[p];
        const bool flat = floored(omega, d, s.ctx.transmission_floor);
        const double t = flat ? s.ctx.transmission_floor : 1.0 - omega * d;
        const std::size_t src = s.argmin[p];
        const double ddark = flat ? 0.0 : dv[src] / a[src % kChannels];
        for (int c = 0; c < kChannels; ++c) {
          const std::size_t i = 3 * p + c;
          o[i] = dv[i] / t + (v[i] - a[c]) * omega * ddark / (t * t);
        }
      }
      return out;
    }
    default:
      throw std::logic_error("classical_input_jvp: unsupported filter");
  }
}

std::vector<char> classical_kink_mask(const FilterId& filter, const Image& input,
                                      std::span<const double> params, double margin) {
  const auto v = input.values();
  std::vector<char> mask(v.size(), 0);
  switch (filter.kind) {
    case FilterKind::tone: {
      const int segments = static_cast<int>(params.size());
      for (std::size_t i = 0; i < v.size(); ++i) {
        const double s = segments * v[i];
        const double nearest = std::round(s);
        mask[i] = std::abs(s - nearest) <= segments * margin ? 1 : 0;
      }
      break;
    }
    case FilterKind::defog: {
      const DefogState s = defog_state(filter, input);
      const double omega = params[0];
      for (std::size_t p = 0; p < input.pixel_count(); ++p) {
        const double d = s.dark.values[p];
        const double gap = std::abs(1.0 - omega * d - s.ctx.transmission_floor);
        if (gap <= margin * std::max(1.0, d)) {
          for (int c = 0; c < kChannels; ++c) mask[3 * p + c] = 1;
        }
      }
      break;
    }
    default:
      break;
  }
  return mask;
}

}  // namespace unifilt::detail
