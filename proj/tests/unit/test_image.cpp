#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "test_util.hpp"
#include "unifilt/image_io.hpp"
#include "unifilt/reference.hpp"

using namespace unifilt;
using unifilt::test::max_abs_diff;
using unifilt::test::random_test_image;

namespace {

std::filesystem::path temp_path(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "unifilt_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST(Image, RejectsBadDimensions) {
  EXPECT_THROW(Image(0, 4), std::invalid_argument);
  EXPECT_THROW(Image(4, -1), std::invalid_argument);
  EXPECT_THROW(Image(2, 2, std::vector<double>(11)), std::invalid_argument);
}

TEST(Image, InterleavedLayout) {
  Image img(2, 3);
  img.at(1, 2, 1) = 0.5;
  EXPECT_EQ(img.values()[(1 * 3 + 2) * 3 + 1], 0.5);
  img.set_pixel(0, 1, {0.1, 0.2, 0.3});
  EXPECT_EQ(img.pixel(0, 1), (Rgb{0.1, 0.2, 0.3}));
}

TEST(Image, Luminance) {
  EXPECT_NEAR(luminance(Rgb{1.0, 1.0, 1.0}), 1.0, 1e-15);
  EXPECT_NEAR(luminance(Rgb{1.0, 0.0, 0.0}), 0.27, 1e-15);
  EXPECT_NEAR(luminance(Rgb{0.0, 1.0, 0.0}), 0.67, 1e-15);
  EXPECT_NEAR(luminance(Rgb{0.0, 0.0, 1.0}), 0.06, 1e-15);
}

TEST(Image, Clamp) {
  Image img(1, 1, std::vector<double>{-0.5, 0.25, 1.5});
  const Image c = clamp01(img);
  EXPECT_EQ(c.pixel(0, 0), (Rgb{0.0, 0.25, 1.0}));
}

TEST(Kernel, GaussianIsNormalizedAndSymmetric) {
  const Kernel g = Kernel::gaussian(13, 5.0);
  EXPECT_NEAR(g.sum(), 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(g.at(-3, 2), g.at(3, -2));
  EXPECT_DOUBLE_EQ(g.at(1, 4), g.at(4, 1));
  EXPECT_GT(g.at(0, 0), g.at(0, 1));
  EXPECT_THROW(Kernel(4), std::invalid_argument);
}

TEST(Convolve, DeltaIsIdentity) {
  const Image img = random_test_image(9, 11, 1);
  EXPECT_EQ(convolve2d(img, Kernel::delta(5)), img);
}

TEST(Convolve, ShiftedDeltaFollowsConvolutionConvention) {
  // out(x) = sum_o K[o] I(x - o): a delta at offset (0, 1) shifts content right.
  const Image img = random_test_image(6, 7, 2);
  Kernel k(3);
  k.at(0, 1) = 1.0;
  const Image out = convolve2d(img, k);
  for (int y = 0; y < 6; ++y) {
    for (int x = 0; x < 7; ++x) {
      for (int c = 0; c < 3; ++c) EXPECT_EQ(out.at(y, x, c), img.at(y, std::max(x - 1, 0), c));
    }
  }
}

TEST(Convolve, MatchesSerialReference) {
  const Image img = random_test_image(23, 17, 3);
  Rng rng(4);
  std::array<Kernel, 3> ks{Kernel(9), Kernel(9), Kernel(9)};
  for (auto& k : ks) {
    for (double& w : k.weights()) w = rng.uniform(-1.0, 1.0);
  }
  EXPECT_LT(max_abs_diff(convolve2d(img, ks), reference::convolve2d(img, ks)), 1e-12);
  EXPECT_LT(max_abs_diff(convolve2d(img, ks[0]), reference::convolve2d(img, ks[0])), 1e-12);
}

TEST(Convolve, SeparableMatchesFullKernel) {
  const Image img = random_test_image(20, 20, 5);
  const auto taps = gaussian_taps(13, 5.0);
  EXPECT_LT(max_abs_diff(convolve_separable(img, taps), convolve2d(img, Kernel::gaussian(13, 5.0))),
            1e-12);
}

TEST(Convolve, ConstantImageUnchangedByNormalizedKernel) {
  const Image img(12, 12, 0.3);
  EXPECT_LT(max_abs_diff(convolve_separable(img, gaussian_taps(13, 5.0)), img), 1e-14);
}

TEST(WindowMin, MatchesSerialReference) {
  Rng rng(6);
  Plane p(19, 23);
  for (double& v : p.values) v = rng.uniform();
  for (int side : {1, 3, 15}) {
    const Plane fast = window_min(p, side);
    const Plane slow = reference::window_min(p, side);
    EXPECT_EQ(fast.values, slow.values) << "side " << side;
  }
}

TEST(WindowMin, ArgminPointsAtMinimum) {
  Rng rng(7);
  Plane p(10, 10);
  for (double& v : p.values) v = rng.uniform();
  std::vector<std::size_t> arg;
  const Plane m = window_min(p, 5, &arg);
  for (std::size_t i = 0; i < m.values.size(); ++i) EXPECT_EQ(p.values[arg[i]], m.values[i]);
}

TEST(ImageIo, PngRoundTripWithinQuantization) {
  const Image img = random_test_image(8, 5, 8);
  const auto path = temp_path("roundtrip.png");
  save_image(img, path);
  const Image back = load_image(path);
  ASSERT_TRUE(back.same_shape(img));
  EXPECT_LE(max_abs_diff(back, img), 0.5 / 255.0 + 1e-12);
}

TEST(ImageIo, ReadsPpmWithComments) {
  const auto path = temp_path("tiny.ppm");
  {
    std::ofstream out(path, std::ios::binary);
    out << "P6\n# comment\n2 1\n255\n";
    const unsigned char px[6] = {0, 128, 255, 10, 20, 30};
    out.write(reinterpret_cast<const char*>(px), 6);
  }
  const Image img = load_image(path);
  ASSERT_EQ(img.width(), 2);
  ASSERT_EQ(img.height(), 1);
  EXPECT_DOUBLE_EQ(img.at(0, 0, 1), 128.0 / 255.0);
  EXPECT_DOUBLE_EQ(img.at(0, 1, 2), 30.0 / 255.0);
}

TEST(ImageIo, RejectsGarbageAndMissingFiles) {
  const auto path = temp_path("garbage.png");
  {
    std::ofstream out(path, std::ios::binary);
    out << "not an image";
  }
  EXPECT_THROW(load_image(path), ImageIoError);
  EXPECT_THROW(load_image(temp_path("missing.png")), ImageIoError);
  const auto ppm = temp_path("wide.ppm");
  {
    std::ofstream out(ppm, std::ios::binary);
    out << "P6\n1 1\n65535\n";
    out.write("\0\0\0\0\0\0", 6);
  }
  EXPECT_THROW(load_image(ppm), ImageIoError);
}

TEST(ImageIo, SupportedExtensions) {
  EXPECT_TRUE(is_supported_image("a.png"));
  EXPECT_TRUE(is_supported_image("a.PPM"));
  EXPECT_FALSE(is_supported_image("a.jpg"));
}
