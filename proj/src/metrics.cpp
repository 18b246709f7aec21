#include "unifilt/metrics.hpp"

#include <cmath>
#include <stdexcept>

#include "unifilt/detail/parallel.hpp"

namespace unifilt {

namespace {

constexpr double kLuminanceWeights[3] = {0.27, 0.67, 0.06};

void check_shape(const Image& a, const Image& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("metric: image shape mismatch");
}

const std::vector<double>& ssim_taps() {
  static const std::vector<double> taps = gaussian_taps(kSsimWindow, kSsimSigma);
  return taps;
}

// Separable Gaussian with zero padding. Symmetric taps, so it is also its own
// adjoint, which the gradient relies on.
Plane blur_zero(const Plane& in) {
  const auto& taps = ssim_taps();
  const int r = kSsimWindow / 2;
  const int h = in.height;
  const int w = in.width;
  Plane tmp(h, w);
  Plane out(h, w);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int o = -r; o <= r; ++o) {
        const int sx = x + o;
        if (sx >= 0 && sx < w) acc += taps[o + r] * in.at(y, sx);
      }
      tmp.at(y, x) = acc;
    }
  }
#pragma omp parallel for schedule(static)
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int o = -r; o <= r; ++o) {
        const int sy = y + o;
        if (sy >= 0 && sy < h) acc += taps[o + r] * tmp.at(sy, x);
      }
      out.at(y, x) = acc;
    }
  }
  return out;
}

Plane product(const Plane& a, const Plane& b) {
  Plane out(a.height, a.width);
  for (std::size_t i = 0; i < out.values.size(); ++i) out.values[i] = a.values[i] * b.values[i];
  return out;
}

struct SsimMaps {
  Plane la, lb, mu_a, mu_b, e_aa, e_bb, e_ab;
  int r = kSsimWindow / 2;

  bool valid(int y, int x) const {
    return y >= r && y < la.height - r && x >= r && x < la.width - r;
  }
  std::size_t window_count() const {
    return static_cast<std::size_t>(la.height - 2 * r) * (la.width - 2 * r);
  }
};

SsimMaps ssim_maps(const Image& a, const Image& b) {
  check_shape(a, b);
  if (a.height() < kSsimWindow || a.width() < kSsimWindow) {
    throw std::invalid_argument("ssim: image smaller than the 11x11 window");
  }
  SsimMaps m;
  m.la = luminance(a);
  m.lb = luminance(b);
  m.mu_a = blur_zero(m.la);
  m.mu_b = blur_zero(m.lb);
  m.e_aa = blur_zero(product(m.la, m.la));
  m.e_bb = blur_zero(product(m.lb, m.lb));
  m.e_ab = blur_zero(product(m.la, m.lb));
  return m;
}

struct WindowTerms {
  double a1, a2, b1, b2, s;
};

WindowTerms window_terms(const SsimMaps& m, std::size_t i) {
  const double ma = m.mu_a.values[i];
  const double mb = m.mu_b.values[i];
  const double va = m.e_aa.values[i] - ma * ma;
  const double vb = m.e_bb.values[i] - mb * mb;
  const double cov = m.e_ab.values[i] - ma * mb;
  WindowTerms t{2.0 * ma * mb + kSsimC1, 2.0 * cov + kSsimC2, ma * ma + mb * mb + kSsimC1,
                va + vb + kSsimC2, 0.0};
  t.s = t.a1 * t.a2 / (t.b1 * t.b2);
  return t;
}

double mean_ssim(const SsimMaps& m) {
  const int w = m.la.width;
  const auto total = detail::blocked_sum(m.la.values.size(), 1, [&](std::size_t i, double* acc) {
    if (m.valid(static_cast<int>(i) / w, static_cast<int>(i) % w)) acc[0] += window_terms(m, i).s;
  });
  return total[0] / static_cast<double>(m.window_count());
}

Image ssim_gradient_from(const SsimMaps& m) {
  const int h = m.la.height;
  const int w = m.la.width;
  const double n = static_cast<double>(m.window_count());
  // Per-window coefficients of S on mu_a, E[ab] and E[a^2].
  Plane c_mu(h, w), c_ab(h, w), c_aa(h, w);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (!m.valid(y, x)) continue;
      const std::size_t i = static_cast<std::size_t>(y) * w + x;
      const WindowTerms t = window_terms(m, i);
      const double ma = m.mu_a.values[i];
      const double mb = m.mu_b.values[i];
      c_mu.values[i] = (2.0 * mb * t.s / t.a1 - 2.0 * ma * t.s / t.b1 - 2.0 * mb * t.s / t.a2 +
                        2.0 * ma * t.s / t.b2) / n;
      c_ab.values[i] = 2.0 * t.s / t.a2 / n;
      c_aa.values[i] = -t.s / t.b2 / n;
    }
  }
  const Plane g_mu = blur_zero(c_mu);
  const Plane g_ab = blur_zero(c_ab);
  const Plane g_aa = blur_zero(c_aa);
  Image out(h, w);
  auto o = out.values();
  for (std::size_t p = 0; p < m.la.values.size(); ++p) {
    const double dl = g_mu.values[p] + g_ab.values[p] * m.lb.values[p] +
                      2.0 * g_aa.values[p] * m.la.values[p];
    for (int c = 0; c < kChannels; ++c) o[3 * p + c] = kLuminanceWeights[c] * dl;
  }
  return out;
}

}  // namespace

double mse(const Image& a, const Image& b) {
  check_shape(a, b);
  const auto av = a.values();
  const auto bv = b.values();
  const auto s = detail::blocked_sum(av.size(), 1, [&](std::size_t i, double* acc) {
    const double d = av[i] - bv[i];
    acc[0] += d * d;
  });
  return s[0] / static_cast<double>(av.size());
}

double psnr(const Image& a, const Image& b) {
  const double m = mse(a, b);
  if (m <= 0.0) return kPsnrCap;
  return std::min(kPsnrCap, 10.0 * std::log10(1.0 / m));
}

double ssim(const Image& a, const Image& b) { return mean_ssim(ssim_maps(a, b)); }

Image ssim_gradient(const Image& a, const Image& b) { return ssim_gradient_from(ssim_maps(a, b)); }

void LossWeights::validate() const {
  if (!(mse_weight >= 0.0) || !(ssim_weight >= 0.0)) {
    throw std::invalid_argument("loss weights must be non-negative");
  }
  if (mse_weight == 0.0 && ssim_weight == 0.0) {
    throw std::invalid_argument("loss weights must not both be zero");
  }
}

double combined_loss(const Image& a, const Image& b, const LossWeights& weights) {
  weights.validate();
  double loss = 0.0;
  if (weights.mse_weight > 0.0) loss += weights.mse_weight * mse(a, b);
  if (weights.ssim_weight > 0.0) loss += weights.ssim_weight * (1.0 - ssim(a, b));
  return loss;
}

LossEval evaluate_loss(const Image& a, const Image& b, const LossWeights& weights) {
  weights.validate();
  check_shape(a, b);
  LossEval e{0.0, Image(a.height(), a.width())};
  auto g = e.gradient.values();
  if (weights.mse_weight > 0.0) {
    e.value += weights.mse_weight * mse(a, b);
    const auto av = a.values();
    const auto bv = b.values();
    const double scale = 2.0 * weights.mse_weight / static_cast<double>(av.size());
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = scale * (av[i] - bv[i]);
  }
  if (weights.ssim_weight > 0.0) {
    const SsimMaps m = ssim_maps(a, b);
    e.value += weights.ssim_weight * (1.0 - mean_ssim(m));
    const Image ds = ssim_gradient_from(m);
    const auto dv = ds.values();
    for (std::size_t i = 0; i < g.size(); ++i) g[i] -= weights.ssim_weight * dv[i];
  }
  return e;
}

}  // namespace unifilt
