#pragma once

#include "unifilt/image.hpp"

namespace unifilt {

inline constexpr double kPsnrCap = 100.0;
inline constexpr int kSsimWindow = 11;
inline constexpr double kSsimSigma = 1.5;
inline constexpr double kSsimC1 = 0.01 * 0.01;
inline constexpr double kSsimC2 = 0.03 * 0.03;

/// Mean over all channel values of (a - b)^2.
double mse(const Image& a, const Image& b);
/// Peak 1.0; identical images give kPsnrCap.
double psnr(const Image& a, const Image& b);
/// Mean SSIM of the luminance planes over all fully contained 11x11 Gaussian
/// windows. Both sides must be at least 11.
double ssim(const Image& a, const Image& b);
/// d ssim(a, b) / d a.
Image ssim_gradient(const Image& a, const Image& b);

struct LossWeights {
  double mse_weight = 1.0;
  double ssim_weight = 1.0;

  void validate() const;
};

double combined_loss(const Image& a, const Image& b, const LossWeights& weights);

struct LossEval {
  double value = 0.0;
  /// d loss / d a.
  Image gradient;
};

LossEval evaluate_loss(const Image& a, const Image& b, const LossWeights& weights);

}  // namespace unifilt
