#include "unifilt/degrade.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "unifilt/rng.hpp"

namespace unifilt {

std::vector<double> sample_box(std::span<const ParamSpec> specs, std::span<const Interval> box,
                               Rng& rng) {
  if (specs.size() != box.size()) throw std::invalid_argument("sampling box arity mismatch");
  std::vector<double> out(specs.size());
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const Interval& b = box[i];
    if (!(b.lo <= b.hi) || b.lo < specs[i].min || b.hi > specs[i].max) {
      throw std::invalid_argument("sampling interval for " + specs[i].name +
                                  " outside the declared range");
    }
    const double u = rng.uniform();
    out[i] = specs[i].scale == ParamScale::log
                 ? std::exp(std::log(b.lo) + u * (std::log(b.hi) - std::log(b.lo)))
                 : b.lo + u * (b.hi - b.lo);
    out[i] = std::clamp(out[i], b.lo, b.hi);
  }
  return out;
}

FilterChain DegradeChain::filters() const {
  FilterChain chain;
  for (const auto& s : stages) chain.stages.push_back(s.filter);
  return chain;
}

void DegradeChain::validate() const {
  if (stages.empty()) throw std::invalid_argument("degrade chain '" + name + "' is empty");
  for (const auto& s : stages) {
    s.filter.validate();
    if (!s.box.empty() && s.box.size() != param_count(s.filter)) {
      throw std::invalid_argument("degrade chain '" + name + "': sampling box arity mismatch");
    }
  }
}

std::vector<std::string> preset_names() {
  return {"pixel_wise", "sharp_defog", "bpw", "kbl", "identity"};
}

DegradeChain degrade_preset(std::string_view name, std::span<const FilterKind> order) {
  DegradeChain chain;
  chain.name = std::string(name);
  const auto pixel_stages = [&] {
    std::span<const FilterKind> kinds = order.empty() ? std::span(kDefaultPixelWiseOrder) : order;
    if (!std::is_permutation(kinds.begin(), kinds.end(), std::begin(kDefaultPixelWiseOrder),
                             std::end(kDefaultPixelWiseOrder))) {
      throw std::invalid_argument(
          "pixel_wise order must list white_balance, gamma, contrast and tone once each");
    }
    for (FilterKind k : kinds) {
      chain.stages.push_back({FilterId::of(k), {}});
    }
  };
  if (name == "pixel_wise") {
    pixel_stages();
  } else if (name == "identity") {
    pixel_stages();
    chain.neutral_only = true;
  } else if (name == "sharp_defog") {
    chain.stages.push_back({FilterId::of(FilterKind::sharpen), {}});
    chain.stages.push_back({FilterId::of(FilterKind::defog), {}});
  } else if (name == "bpw") {
    chain.stages.push_back({FilterId::of(FilterKind::bpw), {}});
  } else if (name == "kbl") {
    chain.stages.push_back({FilterId::of(FilterKind::kbl), {}});
  } else {
    throw std::invalid_argument("unknown preset: " + std::string(name));
  }
  return chain;
}

std::vector<std::vector<double>> sample_params(const DegradeChain& chain, std::uint64_t seed) {
  chain.validate();
  Rng rng(seed);
  std::vector<std::vector<double>> out;
  for (const auto& s : chain.stages) {
    if (chain.neutral_only) {
      out.push_back(neutral_params(s.filter));
      continue;
    }
    const auto specs = param_specs(s.filter);
    std::vector<Interval> box = s.box;
    if (box.empty()) {
      for (const auto& spec : specs) box.push_back({spec.min, spec.max});
    }
    out.push_back(sample_box(specs, box, rng));
  }
  return out;
}

std::vector<double> flatten(const std::vector<std::vector<double>>& params) {
  std::vector<double> out;
  for (const auto& p : params) out.insert(out.end(), p.begin(), p.end());
  return out;
}

Image degrade(const Image& image, const DegradeChain& chain,
              const std::vector<std::vector<double>>& params) {
  chain.validate();
  if (params.size() != chain.stages.size()) {
    throw std::invalid_argument("degrade: expected " + std::to_string(chain.stages.size()) +
                                " parameter vectors, got " + std::to_string(params.size()));
  }
  Image current = image;
  for (std::size_t k = 0; k < chain.stages.size(); ++k) {
    current = apply_filter(chain.stages[k].filter, current, params[k]);
  }
  return current;
}

}  // namespace unifilt
