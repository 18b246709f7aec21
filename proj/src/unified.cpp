#include "unifilt/unified.hpp"

#include <stdexcept>
#include <string>

#include "unifilt/detail/bpw_curve.hpp"

namespace unifilt {

namespace {

void check_unit_box(double v, const char* what) {
  if (!(v >= -1.0 && v <= 1.0)) {
    throw std::invalid_argument(std::string(what) + " must lie in [-1, 1]");
  }
}

}  // namespace

BpwParams BpwParams::from_vector(std::span<const double> values, int segments) {
  if (values.size() != kBpwParamCount) {
    throw std::invalid_argument("BPW expects 12 parameters, got " +
                                std::to_string(values.size()));
  }
  BpwParams p;
  p.segments = segments;
  for (int c = 0; c < kChannels; ++c) {
    p.channels[c] = {values[4 * c], values[4 * c + 1], values[4 * c + 2], values[4 * c + 3]};
  }
  p.validate();
  return p;
}

std::vector<double> BpwParams::to_vector() const {
  std::vector<double> out;
  out.reserve(kBpwParamCount);
  for (const auto& ch : channels) {
    out.insert(out.end(), {ch.theta1, ch.r1, ch.theta2, ch.r2});
  }
  return out;
}

void BpwParams::validate() const {
  if (segments < 1) throw std::invalid_argument("BPW segment count must be positive");
  for (const auto& ch : channels) {
    check_unit_box(ch.theta1, "BPW theta1");
    check_unit_box(ch.r1, "BPW r1");
    check_unit_box(ch.theta2, "BPW theta2");
    check_unit_box(ch.r2, "BPW r2");
  }
}

std::pair<Point2, Point2> bpw_control_points(double theta1, double r1, double theta2, double r2) {
  check_unit_box(theta1, "theta1");
  check_unit_box(r1, "r1");
  check_unit_box(theta2, "theta2");
  check_unit_box(r2, "r2");
  const auto [p1, p2] = detail::control_points(theta1, r1, theta2, r2);
  return {{p1.x, p1.y}, {p2.x, p2.y}};
}

Point2 bezier_point(double q, Point2 p1, Point2 p2) {
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("bezier parameter q must lie in [0,1]");
  const auto c = detail::bezier<double>(q, {p1.x, p1.y}, {p2.x, p2.y});
  return {c.x, c.y};
}

namespace raw {

Image bpw(const Image& image, const BpwParams& params) {
  params.validate();
  Image out = image;
  auto v = out.values();
  for (int c = 0; c < kChannels; ++c) {
    const BpwChannel& ch = params.channels[c];
    const auto table =
        detail::build_segments<double>(ch.theta1, ch.r1, ch.theta2, ch.r2, params.segments);
    const auto n = static_cast<std::ptrdiff_t>(image.pixel_count());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t p = 0; p < n; ++p) {
      double& x = v[3 * p + c];
      x = detail::map_through(table, x);
    }
  }
  return out;
}

Image kbl(const Image& image, const std::array<Kernel, 3>& k1, const std::array<Kernel, 3>& k2) {
  const Image c1 = convolve2d(image, k1);
  const Image c2 = convolve2d(image, k2);
  Image out = image;
  auto v = out.values();
  const auto a = c1.values();
  const auto b = c2.values();
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = v[i] * a[i] + b[i] + v[i];
  return out;
}

}  // namespace raw

Image bpw_filter(const Image& image, const BpwParams& params) {
  return clamp01(raw::bpw(image, params));
}

KblParams KblParams::zeros(int ksize) {
  KblParams p{{Kernel(ksize), Kernel(ksize), Kernel(ksize)},
              {Kernel(ksize), Kernel(ksize), Kernel(ksize)}};
  return p;
}

KblParams KblParams::from_vector(std::span<const double> values, int ksize) {
  const std::size_t per_kernel = static_cast<std::size_t>(ksize) * ksize;
  if (values.size() != 2 * per_kernel * kChannels) {
    throw std::invalid_argument("KBL expects 2*ksize^2*3 = " +
                                std::to_string(2 * per_kernel * kChannels) +
                                " parameters, got " + std::to_string(values.size()));
  }
  KblParams p = zeros(ksize);
  for (int c = 0; c < kChannels; ++c) {
    const auto base = values.begin() + static_cast<std::ptrdiff_t>(2 * per_kernel * c);
    std::copy(base, base + static_cast<std::ptrdiff_t>(per_kernel), p.k1[c].weights().begin());
    std::copy(base + static_cast<std::ptrdiff_t>(per_kernel),
              base + static_cast<std::ptrdiff_t>(2 * per_kernel), p.k2[c].weights().begin());
  }
  p.validate();
  return p;
}

std::vector<double> KblParams::to_vector() const {
  std::vector<double> out;
  for (int c = 0; c < kChannels; ++c) {
    out.insert(out.end(), k1[c].weights().begin(), k1[c].weights().end());
    out.insert(out.end(), k2[c].weights().begin(), k2[c].weights().end());
  }
  return out;
}

void KblParams::validate() const {
  const int side = k1[0].side();
  for (int c = 0; c < kChannels; ++c) {
    for (const Kernel* k : {&k1[c], &k2[c]}) {
      if (k->side() != side) throw std::invalid_argument("KBL kernels must share one side length");
      for (double w : k->weights()) check_unit_box(w, "KBL kernel weight");
    }
  }
}

Image kbl_filter(const Image& image, const KblParams& params) {
  params.validate();
  return clamp01(raw::kbl(image, params.k1, params.k2));
}

}  // namespace unifilt
