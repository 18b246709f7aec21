#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "unifilt/filter.hpp"

namespace unifilt {

inline constexpr double kDefaultFiniteDiffEps = 1e-4;
inline constexpr double kGradCheckTolerance = 1e-3;

/// Derivative of the clamped output along a parameter direction. Values whose
/// pre-clamp output lies outside [0, 1) get exactly zero.
struct Jvp {
  Image tangent;
  /// Indices of parameters sitting on a range bound, where the one-sided
  /// derivative is reported.
  std::vector<std::size_t> boundary_params;
};

Jvp param_jvp(const FilterId& filter, const Image& image, std::span<const double> params,
              std::span<const double> direction);

/// g_k = sum over values of upstream * dF/dp_k; the adjoint of param_jvp.
std::vector<double> param_vjp(const FilterId& filter, const Image& image,
                              std::span<const double> params, const Image& upstream);

/// Forward pass through a chain that keeps every stage's input and pre-clamp
/// output so derivatives can be taken without re-running the filters. Defog
/// stages without a fixed atmospheric light get it estimated from their input
/// here; it is then held constant for differentiation.
class ChainTape {
 public:
  ChainTape(FilterChain chain, const Image& image, std::span<const double> params);

  const Image& output() const { return outputs_.back(); }
  const FilterChain& resolved_chain() const { return chain_; }

  Image jvp(std::span<const double> direction) const;
  std::vector<double> vjp(const Image& upstream) const;

 private:
  Image stage_jvp(std::size_t first_stage, std::span<const double> direction) const;

  FilterChain chain_;
  std::vector<double> params_;
  std::vector<std::size_t> offsets_;
  std::vector<Image> inputs_;
  std::vector<Image> raws_;
  std::vector<Image> outputs_;
};

struct ParamCheck {
  std::string name;
  /// Values at the pixel with the largest relative error.
  double analytic = 0.0;
  double numeric = 0.0;
  double abs_error = 0.0;
  double rel_error = 0.0;
  std::size_t compared = 0;
  std::size_t excluded = 0;
};

struct GradReport {
  std::string filter;
  double eps = kDefaultFiniteDiffEps;
  std::vector<ParamCheck> params;
  double max_rel_error = 0.0;
  bool pass = false;
};

nlohmann::json to_json(const GradReport& report);

using JvpFn = std::function<Image(std::span<const double> direction)>;

/// Central differences per parameter against the analytic JVP. Values that
/// saturate the clamp at p or p +/- eps, or sit within 2*eps of a knot, are
/// excluded. Throws if a parameter is within eps of its range bound.
GradReport finite_diff_check(const FilterId& filter, const Image& image,
                             std::span<const double> params, double eps = kDefaultFiniteDiffEps);
/// Same check against a caller-supplied derivative.
GradReport finite_diff_check(const FilterId& filter, const Image& image,
                             std::span<const double> params, double eps, const JvpFn& analytic);

}  // namespace unifilt
