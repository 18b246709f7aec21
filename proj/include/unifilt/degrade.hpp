#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "unifilt/filter.hpp"

namespace unifilt {

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

class Rng;

/// Draws one value per interval, uniform (log-uniform for log-scale specs).
std::vector<double> sample_box(std::span<const ParamSpec> specs, std::span<const Interval> box,
                               Rng& rng);

struct DegradeStage {
  FilterId filter;
  /// Per-parameter sampling intervals; empty means the declared range.
  std::vector<Interval> box;
};

struct DegradeChain {
  std::string name;
  std::vector<DegradeStage> stages;
  /// Control run: sampling returns neutral parameters.
  bool neutral_only = false;

  FilterChain filters() const;
  void validate() const;
};

inline constexpr FilterKind kDefaultPixelWiseOrder[] = {
    FilterKind::white_balance, FilterKind::gamma, FilterKind::contrast, FilterKind::tone};

/// pixel_wise, sharp_defog, bpw, kbl, identity.
std::vector<std::string> preset_names();
/// `order` applies to pixel_wise (and identity); empty means the canonical
/// white_balance, gamma, contrast, tone. Throws on unknown names.
DegradeChain degrade_preset(std::string_view name, std::span<const FilterKind> order = {});

std::vector<std::vector<double>> sample_params(const DegradeChain& chain, std::uint64_t seed);
Image degrade(const Image& image, const DegradeChain& chain,
              const std::vector<std::vector<double>>& params);
/// Stage parameter vectors concatenated in chain order.
std::vector<double> flatten(const std::vector<std::vector<double>>& params);

}  // namespace unifilt
