#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "unifilt/filter.hpp"
#include "unifilt/metrics.hpp"

namespace unifilt {

enum class ParamInit { neutral, random };

/// Coordinates Adam works in. unit: every parameter rescaled so its declared
/// range is [0, 1] (log for log-scale ranges). raw: the parameters as is.
enum class ParamSpace { unit, raw };

struct FitConfig {
  int iterations = 50;
  double learning_rate = 0.01;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  LossWeights loss;
  ParamInit param_init = ParamInit::neutral;
  std::uint64_t init_seed = 0;
  ParamSpace param_space = ParamSpace::unit;

  void validate() const;
};

nlohmann::json to_json(const FitConfig& cfg);
/// Missing keys keep their defaults; unknown keys are rejected.
FitConfig fit_config_from_json(const nlohmann::json& j);

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  int step = 0;

  explicit AdamState(std::size_t n = 0) : m(n, 0.0), v(n, 0.0) {}
};

/// One bias-corrected Adam update of `params` in place, followed by clamping
/// into [lower, upper] per component.
void adam_step(AdamState& state, std::span<double> params, std::span<const double> grad,
               const FitConfig& cfg, std::span<const double> lower,
               std::span<const double> upper);

/// Maps parameters to [0, 1] per declared range (log scale where declared).
std::vector<double> to_unit(std::span<const ParamSpec> specs, std::span<const double> params);
std::vector<double> from_unit(std::span<const ParamSpec> specs, std::span<const double> unit);

struct TraceEntry {
  int iteration = 0;
  double loss = 0.0;
  double psnr = 0.0;
};

struct FitTrace {
  std::vector<TraceEntry> entries;
  std::vector<double> final_params;
  double wall_seconds = 0.0;
};

struct FitResult {
  /// Best-loss parameters seen.
  std::vector<double> params;
  double loss = 0.0;
  FitTrace trace;
  /// Chain with any defog atmospheric light fixed at initialization.
  FilterChain chain;
  Image output;
};

FitResult fit_chain(const FilterChain& chain, const Image& source, const Image& target,
                    const FitConfig& cfg);
FitResult fit_filter(const FilterId& filter, const Image& source, const Image& target,
                     const FitConfig& cfg);

/// "iteration,loss,psnr" rows with a header.
std::string trace_csv(const FitTrace& trace);
nlohmann::json to_json(const FitTrace& trace);

}  // namespace unifilt
