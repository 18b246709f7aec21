#include <gtest/gtest.h>

#include <cmath>

#include "test_util.hpp"
#include "unifilt/metrics.hpp"

using namespace unifilt;
using unifilt::test::random_test_image;
using unifilt::test::smooth_image;

namespace {

// Direct per-window SSIM on luminance with a normalized 2-D Gaussian.
double ssim_oracle(const Image& a, const Image& b) {
  const int n = 11;
  const int r = n / 2;
  std::vector<double> g(n * n);
  double total = 0.0;
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) {
      g[y * n + x] = std::exp(-((y - r) * (y - r) + (x - r) * (x - r)) / (2.0 * 1.5 * 1.5));
      total += g[y * n + x];
    }
  }
  for (double& v : g) v /= total;
  auto lum = [](const Image& img, int y, int x) {
    return 0.27 * img.at(y, x, 0) + 0.67 * img.at(y, x, 1) + 0.06 * img.at(y, x, 2);
  };
  double sum = 0.0;
  int windows = 0;
  for (int y0 = 0; y0 + n <= a.height(); ++y0) {
    for (int x0 = 0; x0 + n <= a.width(); ++x0) {
      double ma = 0, mb = 0;
      for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) {
          ma += g[y * n + x] * lum(a, y0 + y, x0 + x);
          mb += g[y * n + x] * lum(b, y0 + y, x0 + x);
        }
      }
      double va = 0, vb = 0, cov = 0;
      for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) {
          const double da = lum(a, y0 + y, x0 + x) - ma;
          const double db = lum(b, y0 + y, x0 + x) - mb;
          va += g[y * n + x] * da * da;
          vb += g[y * n + x] * db * db;
          cov += g[y * n + x] * da * db;
        }
      }
      const double c1 = 1e-4, c2 = 9e-4;
      sum += (2 * ma * mb + c1) * (2 * cov + c2) / ((ma * ma + mb * mb + c1) * (va + vb + c2));
      ++windows;
    }
  }
  return sum / windows;
}

}  // namespace

TEST(Mse, Examples) {
  const Image a(4, 4, 0.5);
  EXPECT_EQ(mse(a, a), 0.0);
  EXPECT_DOUBLE_EQ(mse(a, Image(4, 4, 0.6)), 0.01);
  EXPECT_THROW(mse(a, Image(4, 5)), std::invalid_argument);
}

TEST(Psnr, Examples) {
  const Image a(4, 4, 0.5);
  EXPECT_EQ(psnr(a, a), kPsnrCap);
  EXPECT_NEAR(psnr(a, Image(4, 4, 0.6)), 20.0, 1e-9);
  EXPECT_NEAR(psnr(Image(4, 4, 0.0), Image(4, 4, 1.0)), 0.0, 1e-12);
}

TEST(Ssim, IdenticalIsOne) {
  const Image a = random_test_image(24, 20, 1);
  EXPECT_NEAR(ssim(a, a), 1.0, 1e-12);
  EXPECT_NEAR(ssim(Image(16, 16, 0.3), Image(16, 16, 0.3)), 1.0, 1e-12);
}

TEST(Ssim, AnticorrelatedIsLow) {
  Image a(16, 16), b(16, 16);
  for (int y = 0; y < 16; ++y) {
    for (int x = 0; x < 16; ++x) {
      const double v = (x + y) % 2 == 0 ? 0.9 : 0.1;
      for (int c = 0; c < 3; ++c) {
        a.at(y, x, c) = v;
        b.at(y, x, c) = 1.0 - v;
      }
    }
  }
  EXPECT_LT(ssim(a, b), 0.5);
}

TEST(Ssim, MatchesBruteForce) {
  for (std::uint64_t seed : {2u, 3u, 4u}) {
    const Image a = random_test_image(19, 23, seed);
    const Image b = random_test_image(19, 23, seed + 10);
    EXPECT_NEAR(ssim(a, b), ssim_oracle(a, b), 1e-12);
  }
  const Image s = smooth_image(20, 20);
  const Image t = random_test_image(20, 20, 9);
  EXPECT_NEAR(ssim(s, t), ssim_oracle(s, t), 1e-12);
}

TEST(Ssim, Symmetric) {
  const Image a = random_test_image(16, 16, 5);
  const Image b = random_test_image(16, 16, 6);
  EXPECT_NEAR(ssim(a, b), ssim(b, a), 1e-14);
}

TEST(Ssim, TooSmallThrows) {
  EXPECT_THROW(ssim(Image(10, 20), Image(10, 20)), std::invalid_argument);
  EXPECT_THROW(ssim(Image(20, 10), Image(20, 10)), std::invalid_argument);
}

TEST(Loss, CombinedExamples) {
  const Image a = random_test_image(16, 16, 7);
  const Image b = random_test_image(16, 16, 8);
  EXPECT_NEAR(combined_loss(a, a, {}), 0.0, 1e-12);
  EXPECT_NEAR(combined_loss(a, b, {}), mse(a, b) + 1.0 - ssim(a, b), 1e-14);
  EXPECT_NEAR(combined_loss(a, b, {2.0, 0.0}), 2.0 * mse(a, b), 1e-14);
  EXPECT_THROW(combined_loss(a, b, {0.0, 0.0}), std::invalid_argument);
  EXPECT_THROW(combined_loss(a, b, {-1.0, 1.0}), std::invalid_argument);
  EXPECT_NEAR(evaluate_loss(a, b, {}).value, combined_loss(a, b, {}), 1e-14);
}

TEST(Loss, GradientMatchesFiniteDifferences) {
  const Image b = random_test_image(14, 13, 9);
  Image a = random_test_image(14, 13, 10);
  for (const LossWeights w : {LossWeights{}, LossWeights{1.0, 0.0}, LossWeights{0.0, 1.0}}) {
    const LossEval e = evaluate_loss(a, b, w);
    Rng rng(11);
    for (int k = 0; k < 30; ++k) {
      const auto i = static_cast<std::size_t>(rng.uniform() * static_cast<double>(a.size()));
      const double keep = a.values()[i];
      const double eps = 1e-6;
      a.values()[i] = keep + eps;
      const double up = combined_loss(a, b, w);
      a.values()[i] = keep - eps;
      const double down = combined_loss(a, b, w);
      a.values()[i] = keep;
      const double fd = (up - down) / (2 * eps);
      EXPECT_NEAR(e.gradient.values()[i], fd, 1e-4 * std::abs(fd) + 1e-9);
    }
  }
}
