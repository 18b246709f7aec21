#include "unifilt/filter.hpp"

#include <stdexcept>

namespace unifilt {

namespace {

constexpr const char* kChannelNames[] = {"R", "G", "B"};

}  // namespace

std::string_view filter_name(FilterKind kind) {
  switch (kind) {
    case FilterKind::gamma: return "gamma";
    case FilterKind::white_balance: return "white_balance";
    case FilterKind::contrast: return "contrast";
    case FilterKind::tone: return "tone";
    case FilterKind::sharpen: return "sharpen";
    case FilterKind::defog: return "defog";
    case FilterKind::bpw: return "bpw";
    case FilterKind::kbl: return "kbl";
  }
  return "unknown";
}

FilterKind parse_filter_kind(std::string_view name) {
  for (FilterKind k : kAllFilterKinds) {
    if (filter_name(k) == name) return k;
  }
  throw std::invalid_argument("unknown filter: " + std::string(name));
}

void FilterId::validate() const {
  if (segments < 1) throw std::invalid_argument("segment count must be positive");
  if (ksize < 1 || ksize % 2 == 0) throw std::invalid_argument("ksize must be odd");
  if (defog.window < 1 || defog.window % 2 == 0) {
    throw std::invalid_argument("dark channel window must be odd");
  }
  if (!(defog.transmission_floor > 0.0 && defog.transmission_floor <= 0.5)) {
    throw std::invalid_argument("transmission floor must lie in (0, 0.5]");
  }
}

std::vector<ParamSpec> param_specs(const FilterId& filter) {
  std::vector<ParamSpec> specs;
  switch (filter.kind) {
    case FilterKind::gamma:
      specs.push_back({"gamma", 1.0 / 3.0, 3.0, 1.0, ParamScale::log});
      break;
    case FilterKind::white_balance:
      for (const char* c : kChannelNames) specs.push_back({std::string("W_") + c, 0.5, 2.0, 1.0});
      break;
    case FilterKind::contrast:
      specs.push_back({"alpha", -1.0, 1.0, 0.0});
      break;
    case FilterKind::tone:
      for (int j = 0; j < filter.segments; ++j) {
        specs.push_back({"t" + std::to_string(j), 0.5, 2.0, 1.0});
      }
      break;
    case FilterKind::sharpen:
      specs.push_back({"lambda", 0.0, 5.0, 0.0});
      break;
    case FilterKind::defog:
      specs.push_back({"omega", 0.0, 1.0, 0.0});
      break;
    case FilterKind::bpw:
      for (const char* c : kChannelNames) {
        for (const char* p : {"theta1", "r1", "theta2", "r2"}) {
          specs.push_back({std::string(c) + "." + p, -1.0, 1.0, 0.0});
        }
      }
      break;
    case FilterKind::kbl: {
      const int r = filter.ksize / 2;
      for (const char* c : kChannelNames) {
        for (const char* k : {"k1", "k2"}) {
          for (int dy = -r; dy <= r; ++dy) {
            for (int dx = -r; dx <= r; ++dx) {
              specs.push_back({std::string(c) + "." + k + "[" + std::to_string(dy) + "," +
                                   std::to_string(dx) + "]",
                               -1.0, 1.0, 0.0});
            }
          }
        }
      }
      break;
    }
  }
  return specs;
}

std::size_t param_count(const FilterId& filter) {
  switch (filter.kind) {
    case FilterKind::gamma:
    case FilterKind::contrast:
    case FilterKind::sharpen:
    case FilterKind::defog: return 1;
    case FilterKind::white_balance: return 3;
    case FilterKind::tone: return static_cast<std::size_t>(filter.segments);
    case FilterKind::bpw: return kBpwParamCount;
    case FilterKind::kbl: return 2 * static_cast<std::size_t>(filter.ksize) * filter.ksize * 3;
  }
  return 0;
}

std::vector<double> neutral_params(const FilterId& filter) {
  std::vector<double> out;
  for (const auto& s : param_specs(filter)) out.push_back(s.neutral);
  return out;
}

void check_params(const FilterId& filter, std::span<const double> params) {
  filter.validate();
  if (params.size() != param_count(filter)) {
    throw std::invalid_argument(std::string(filter_name(filter.kind)) + " expects " +
                                std::to_string(param_count(filter)) + " parameters, got " +
                                std::to_string(params.size()));
  }
  const auto specs = param_specs(filter);
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (!(params[i] >= specs[i].min && params[i] <= specs[i].max)) {
      throw std::invalid_argument(std::string(filter_name(filter.kind)) + " parameter " +
                                  specs[i].name + "=" + std::to_string(params[i]) +
                                  " outside [" + std::to_string(specs[i].min) + ", " +
                                  std::to_string(specs[i].max) + "]");
    }
  }
}

DefogContext resolve_defog_context(const FilterId& filter, const Image& input) {
  DefogContext ctx;
  ctx.dark_channel_window = filter.defog.window;
  ctx.transmission_floor = filter.defog.transmission_floor;
  ctx.atmospheric_light = filter.defog.atmospheric_light.value_or(
      estimate_atmospheric_light(input, filter.defog.window));
  return ctx;
}

Image apply_filter_raw(const FilterId& filter, const Image& image, std::span<const double> params) {
  check_params(filter, params);
  switch (filter.kind) {
    case FilterKind::gamma: return raw::gamma(image, params[0]);
    case FilterKind::white_balance:
      return raw::white_balance(image, {params[0], params[1], params[2]});
    case FilterKind::contrast: return raw::contrast(image, params[0]);
    case FilterKind::tone: return raw::tone(image, params);
    case FilterKind::sharpen: return raw::sharpen(image, params[0]);
    case FilterKind::defog:
      return raw::defog(image, params[0], resolve_defog_context(filter, image));
    case FilterKind::bpw: return raw::bpw(image, BpwParams::from_vector(params, filter.segments));
    case FilterKind::kbl: {
      const KblParams k = KblParams::from_vector(params, filter.ksize);
      return raw::kbl(image, k.k1, k.k2);
    }
  }
  throw std::logic_error("unhandled filter kind");
}

Image apply_filter(const FilterId& filter, const Image& image, std::span<const double> params) {
  return clamp01(apply_filter_raw(filter, image, params));
}

std::size_t FilterChain::param_count() const {
  std::size_t n = 0;
  for (const auto& s : stages) n += unifilt::param_count(s);
  return n;
}

std::vector<ParamSpec> FilterChain::param_specs() const {
  std::vector<ParamSpec> out;
  for (const auto& s : stages) {
    for (auto spec : unifilt::param_specs(s)) {
      spec.name = std::string(filter_name(s.kind)) + "." + spec.name;
      out.push_back(std::move(spec));
    }
  }
  return out;
}

std::vector<double> FilterChain::neutral_params() const {
  std::vector<double> out;
  for (const auto& s : stages) {
    const auto n = unifilt::neutral_params(s);
    out.insert(out.end(), n.begin(), n.end());
  }
  return out;
}

std::vector<std::span<const double>> FilterChain::split(std::span<const double> params) const {
  if (params.size() != param_count()) {
    throw std::invalid_argument("chain '" + describe() + "' expects " +
                                std::to_string(param_count()) + " parameters, got " +
                                std::to_string(params.size()));
  }
  std::vector<std::span<const double>> parts;
  std::size_t offset = 0;
  for (const auto& s : stages) {
    const std::size_t n = unifilt::param_count(s);
    parts.push_back(params.subspan(offset, n));
    offset += n;
  }
  return parts;
}

std::string FilterChain::describe() const {
  std::string out;
  for (const auto& s : stages) {
    if (!out.empty()) out += "+";
    out += filter_name(s.kind);
  }
  return out;
}

Image apply_chain(const FilterChain& chain, const Image& image, std::span<const double> params) {
  if (chain.stages.empty()) throw std::invalid_argument("filter chain is empty");
  const auto parts = chain.split(params);
  Image current = image;
  for (std::size_t k = 0; k < chain.stages.size(); ++k) {
    current = apply_filter(chain.stages[k], current, parts[k]);
  }
  return current;
}

}  // namespace unifilt
