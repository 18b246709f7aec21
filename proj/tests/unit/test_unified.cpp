#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "test_util.hpp"
#include "unifilt/classical.hpp"
#include "unifilt/metrics.hpp"
#include "unifilt/reference.hpp"
#include "unifilt/unified.hpp"

using namespace unifilt;
using unifilt::test::max_abs_diff;
using unifilt::test::random_test_image;
using unifilt::test::smooth_image;

namespace {

BpwParams random_bpw(Rng& rng, int segments = kDefaultBpwSegments) {
  std::vector<double> v(kBpwParamCount);
  for (double& x : v) x = rng.uniform(-1.0, 1.0);
  return BpwParams::from_vector(v, segments);
}

// Exact curve value at input x: bisection on the monotone x(q).
double bezier_oracle(double x, Point2 p1, Point2 p2) {
  double lo = 0.0;
  double hi = 1.0;
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (bezier_point(mid, p1, p2).x < x) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return bezier_point(0.5 * (lo + hi), p1, p2).y;
}

Image gray_ramp(int n) {
  Image img(1, n);
  for (int x = 0; x < n; ++x) {
    for (int c = 0; c < 3; ++c) img.at(0, x, c) = static_cast<double>(x) / (n - 1);
  }
  return img;
}

}  // namespace

TEST(BpwControlPoints, Examples) {
  const auto [p1, p2] = bpw_control_points(0, 0, 0, 0);
  const double h = 0.5 * std::sqrt(0.5);
  EXPECT_NEAR(p1.x, h, 1e-15);
  EXPECT_NEAR(p1.y, h, 1e-15);
  EXPECT_NEAR(p2.x, 1.0 - h, 1e-15);
  EXPECT_NEAR(p2.y, 1.0 - h, 1e-15);
  const auto [q1, q2] = bpw_control_points(-1, 1, -1, 1);
  EXPECT_NEAR(q1.x, 1.0, 1e-15);
  EXPECT_NEAR(q1.y, 0.0, 1e-15);
  EXPECT_NEAR(q2.x, 0.0, 1e-15);
  EXPECT_NEAR(q2.y, 1.0, 1e-15);
  EXPECT_THROW(bpw_control_points(1.5, 0, 0, 0), std::invalid_argument);
}

TEST(BpwControlPoints, InsideUnitSquare) {
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    const auto [p1, p2] = bpw_control_points(rng.uniform(-1, 1), rng.uniform(-1, 1),
                                             rng.uniform(-1, 1), rng.uniform(-1, 1));
    for (double v : {p1.x, p1.y, p2.x, p2.y}) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
  }
}

TEST(Bezier, Examples) {
  const Point2 p1{0.2, 0.7};
  const Point2 p2{0.9, 0.1};
  EXPECT_EQ(bezier_point(0.0, p1, p2).x, 0.0);
  EXPECT_EQ(bezier_point(0.0, p1, p2).y, 0.0);
  EXPECT_EQ(bezier_point(1.0, p1, p2).x, 1.0);
  EXPECT_EQ(bezier_point(1.0, p1, p2).y, 1.0);
  const Point2 mid = bezier_point(0.5, {0.5, 0.5}, {0.5, 0.5});
  EXPECT_NEAR(mid.x, 0.5, 1e-15);
  EXPECT_NEAR(mid.y, 0.5, 1e-15);
  for (double q = 0.0; q <= 1.0; q += 0.05) {
    const Point2 c = bezier_point(q, {0.3, 0.3}, {0.8, 0.8});
    EXPECT_NEAR(c.x, c.y, 1e-15);
  }
  EXPECT_THROW(bezier_point(1.1, p1, p2), std::invalid_argument);
}

TEST(Bpw, ZeroParamsIdentity) {
  const Image img = random_test_image(17, 13, 2);
  EXPECT_LT(max_abs_diff(bpw_filter(img, BpwParams{}), img), 1e-9);
}

TEST(Bpw, EndpointsAndMonotone) {
  Rng rng(3);
  const Image ramp = gray_ramp(1025);
  for (int trial = 0; trial < 200; ++trial) {
    const Image out = bpw_filter(ramp, random_bpw(rng));
    for (int c = 0; c < 3; ++c) {
      EXPECT_EQ(out.at(0, 0, c), 0.0);
      EXPECT_EQ(out.at(0, 1024, c), 1.0);
      for (int x = 1; x < 1025; ++x) ASSERT_GE(out.at(0, x, c), out.at(0, x - 1, c));
    }
  }
}

TEST(Bpw, ConvergesToBezierCurve) {
  Rng rng(4);
  const Image ramp = gray_ramp(1024);
  for (int segments : {8, 32}) {
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
      const BpwParams p = random_bpw(rng, segments);
      const Image out = bpw_filter(ramp, p);
      for (int c = 0; c < 3; ++c) {
        const auto& ch = p.channels[c];
        const auto [p1, p2] = bpw_control_points(ch.theta1, ch.r1, ch.theta2, ch.r2);
        for (int x = 0; x < 1024; ++x) {
          worst = std::max(worst, std::abs(out.at(0, x, c) - bezier_oracle(ramp.at(0, x, c), p1, p2)));
        }
      }
    }
    EXPECT_LT(worst, segments == 8 ? 0.01 : 0.002) << "L=" << segments;
  }
}

TEST(Bpw, ErrorShrinksWithSegments) {
  Rng rng(14);
  const Image ramp = gray_ramp(1024);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> v(kBpwParamCount);
    for (double& x : v) x = rng.uniform(-1.0, 1.0);
    double previous = 1.0;
    for (int segments : {8, 32, 128}) {
      const BpwParams p = BpwParams::from_vector(v, segments);
      const Image out = bpw_filter(ramp, p);
      double worst = 0.0;
      for (int c = 0; c < 3; ++c) {
        const auto& ch = p.channels[c];
        const auto [p1, p2] = bpw_control_points(ch.theta1, ch.r1, ch.theta2, ch.r2);
        for (int x = 0; x < 1024; ++x) {
          worst = std::max(worst, std::abs(out.at(0, x, c) - bezier_oracle(ramp.at(0, x, c), p1, p2)));
        }
      }
      EXPECT_LE(worst, previous) << "L=" << segments;
      previous = worst;
    }
    EXPECT_LT(previous, 0.02);
  }
}

TEST(Bpw, ChannelsAreSeparable) {
  Rng rng(5);
  const Image img = random_test_image(8, 8, 6);
  BpwParams a = random_bpw(rng);
  BpwParams b = a;
  b.channels[1] = {0.9, -0.4, 0.2, 0.7};
  const Image oa = bpw_filter(img, a);
  const Image ob = bpw_filter(img, b);
  for (int y = 0; y < 8; ++y) {
    for (int x = 0; x < 8; ++x) {
      EXPECT_EQ(oa.at(y, x, 0), ob.at(y, x, 0));
      EXPECT_EQ(oa.at(y, x, 2), ob.at(y, x, 2));
    }
  }
}

TEST(Bpw, ParamValidation) {
  std::vector<double> v(12, 0.0);
  v[5] = 1.2;
  EXPECT_THROW(BpwParams::from_vector(v), std::invalid_argument);
  EXPECT_THROW(BpwParams::from_vector(std::vector<double>(11, 0.0)), std::invalid_argument);
  Rng rng(6);
  const BpwParams p = random_bpw(rng);
  const BpwParams back = BpwParams::from_vector(p.to_vector());
  EXPECT_EQ(back.to_vector(), p.to_vector());
}

TEST(Kbl, Examples) {
  const Image img = random_test_image(10, 10, 7);
  EXPECT_EQ(kbl_filter(img, KblParams::zeros()), img);

  KblParams p = KblParams::zeros();
  for (auto& k : p.k2) k.at(0, 0) = 1.0;
  const Image c3(5, 5, 0.3);
  EXPECT_LT(max_abs_diff(kbl_filter(c3, p), Image(5, 5, 0.6)), 1e-15);

  KblParams q = KblParams::zeros();
  for (auto& k : q.k1) k.at(0, 0) = 1.0;
  const Image c5(5, 5, 0.5);
  EXPECT_LT(max_abs_diff(kbl_filter(c5, q), Image(5, 5, 0.75)), 1e-15);
}

TEST(Kbl, MatchesSerialReference) {
  Rng rng(8);
  const Image img = random_test_image(14, 19, 9);
  std::vector<double> v(486);
  for (double& x : v) x = rng.uniform(-1.0, 1.0);
  const KblParams p = KblParams::from_vector(v);
  EXPECT_LT(max_abs_diff(raw::kbl(img, p.k1, p.k2), reference::kbl(img, p.k1, p.k2)), 1e-12);
  EXPECT_EQ(KblParams::from_vector(p.to_vector()).to_vector(), v);
}

TEST(Kbl, LinearWhenK1IsZero) {
  Rng rng(10);
  std::array<Kernel, 3> k1{Kernel(5), Kernel(5), Kernel(5)};
  std::array<Kernel, 3> k2{Kernel(5), Kernel(5), Kernel(5)};
  for (auto& k : k2) {
    for (double& w : k.weights()) w = rng.uniform(-1.0, 1.0);
  }
  const Image a = random_test_image(9, 9, 11);
  const Image b = random_test_image(9, 9, 12);
  Image mix(9, 9);
  for (std::size_t i = 0; i < mix.size(); ++i) mix.values()[i] = 0.7 * a.values()[i] - 1.3 * b.values()[i];
  const Image fa = raw::kbl(a, k1, k2);
  const Image fb = raw::kbl(b, k1, k2);
  const Image fm = raw::kbl(mix, k1, k2);
  for (std::size_t i = 0; i < mix.size(); ++i) {
    EXPECT_NEAR(fm.values()[i], 0.7 * fa.values()[i] - 1.3 * fb.values()[i], 1e-12);
  }
}

TEST(Kbl, ReproducesSharpenFamily) {
  const Image img = smooth_image(64, 64);
  const Kernel g9 = Kernel::gaussian(kDefaultKblKernelSide, kSharpenSigma);
  for (double lambda : {0.0, 0.5, 1.0, 2.5, 5.0}) {
    std::array<Kernel, 3> k1{Kernel(9), Kernel(9), Kernel(9)};
    Kernel k2(9);
    for (int dy = -4; dy <= 4; ++dy) {
      for (int dx = -4; dx <= 4; ++dx) {
        k2.at(dy, dx) = lambda * ((dy == 0 && dx == 0 ? 1.0 : 0.0) - g9.at(dy, dx));
      }
    }
    const Image out = clamp01(raw::kbl(img, k1, {k2, k2, k2}));
    EXPECT_GE(psnr(out, sharpen_filter(img, lambda)), 35.0) << "lambda " << lambda;
  }
}
