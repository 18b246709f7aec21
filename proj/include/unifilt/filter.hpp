#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "unifilt/classical.hpp"
#include "unifilt/image.hpp"
#include "unifilt/unified.hpp"

namespace unifilt {

enum class FilterKind { gamma, white_balance, contrast, tone, sharpen, defog, bpw, kbl };

inline constexpr FilterKind kAllFilterKinds[] = {
    FilterKind::gamma,   FilterKind::white_balance, FilterKind::contrast, FilterKind::tone,
    FilterKind::sharpen, FilterKind::defog,         FilterKind::bpw,      FilterKind::kbl};

std::string_view filter_name(FilterKind kind);
/// Throws std::invalid_argument for unknown names.
FilterKind parse_filter_kind(std::string_view name);

struct DefogSettings {
  int window = kDefaultDarkChannelWindow;
  double transmission_floor = kDefaultTransmissionFloor;
  /// Estimated from the defog input when unset.
  std::optional<Rgb> atmospheric_light;
};

/// A filter together with its fixed hyperparameters.
struct FilterId {
  FilterKind kind = FilterKind::gamma;
  /// Tone interval count and BPW segment count.
  int segments = kDefaultBpwSegments;
  int ksize = kDefaultKblKernelSide;
  DefogSettings defog;

  static FilterId of(FilterKind kind) {
    FilterId id;
    id.kind = kind;
    return id;
  }
  void validate() const;
};

enum class ParamScale { linear, log };

struct ParamSpec {
  std::string name;
  double min = 0.0;
  double max = 1.0;
  double neutral = 0.0;
  ParamScale scale = ParamScale::linear;
};

std::vector<ParamSpec> param_specs(const FilterId& filter);
std::size_t param_count(const FilterId& filter);
std::vector<double> neutral_params(const FilterId& filter);

/// Throws std::invalid_argument on arity mismatch or out-of-range values.
void check_params(const FilterId& filter, std::span<const double> params);

DefogContext resolve_defog_context(const FilterId& filter, const Image& input);

/// Pre-clamp output of one filter.
Image apply_filter_raw(const FilterId& filter, const Image& image, std::span<const double> params);
Image apply_filter(const FilterId& filter, const Image& image, std::span<const double> params);

/// Filters applied in order with clamping between stages; parameters are the
/// concatenation of each stage's vector.
struct FilterChain {
  std::vector<FilterId> stages;

  std::size_t param_count() const;
  /// Stage-prefixed specs ("gamma.gamma", "tone.t3", ...).
  std::vector<ParamSpec> param_specs() const;
  std::vector<double> neutral_params() const;
  std::vector<std::span<const double>> split(std::span<const double> params) const;
  std::string describe() const;
};

Image apply_chain(const FilterChain& chain, const Image& image, std::span<const double> params);

}  // namespace unifilt
