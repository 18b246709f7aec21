#include "unifilt/augment.hpp"

#include <stdexcept>

#include "unifilt/rng.hpp"

namespace unifilt {

namespace {

std::vector<Interval> per_channel(Interval theta1, Interval r1, Interval theta2, Interval r2) {
  std::vector<Interval> box;
  for (int c = 0; c < kChannels; ++c) box.insert(box.end(), {theta1, r1, theta2, r2});
  return box;
}

FilterId bpw_id(int segments) {
  FilterId id = FilterId::of(FilterKind::bpw);
  id.segments = segments;
  return id;
}

}  // namespace

void AugmentSpec::validate() const {
  if (box.size() != static_cast<std::size_t>(kBpwParamCount)) {
    throw std::invalid_argument("augment box needs 12 intervals");
  }
  for (const auto& b : box) {
    if (!(b.lo <= b.hi) || b.lo < -1.0 || b.hi > 1.0) {
      throw std::invalid_argument("augment intervals must lie in [-1, 1]");
    }
  }
  if (segments < 1) throw std::invalid_argument("segment count must be positive");
}

std::vector<std::string> augment_box_names() { return {"full", "low_light", "fog", "neutral"}; }

std::vector<Interval> augment_box(std::string_view name) {
  if (name == "full") return per_channel({-1, 1}, {-1, 1}, {-1, 1}, {-1, 1});
  if (name == "low_light") return per_channel({-1, -0.3}, {-0.5, 1}, {0.3, 1}, {-0.5, 1});
  if (name == "fog") return per_channel({0.9, 1}, {0.2, 0.6}, {-0.1, 0.1}, {0.7, 1});
  if (name == "neutral") return per_channel({0, 0}, {0, 0}, {0, 0}, {0, 0});
  throw std::invalid_argument("unknown augment box: " + std::string(name));
}

std::vector<double> sample_augment_params(const AugmentSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  return sample_box(param_specs(bpw_id(spec.segments)), spec.box, rng);
}

Image bpw_augment(const Image& image, const AugmentSpec& spec) {
  return apply_filter(bpw_id(spec.segments), image, sample_augment_params(spec));
}

}  // namespace unifilt
