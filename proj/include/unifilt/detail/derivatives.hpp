#pragma once

#include <span>
#include <vector>

#include "unifilt/filter.hpp"

// Derivatives of each filter's pre-clamp output. The defog atmospheric light
// must already be resolved in `filter` (it is a constant of differentiation).
namespace unifilt::detail {

Image raw_param_jvp(const FilterId& filter, const Image& input, std::span<const double> params,
                    std::span<const double> direction);
std::vector<double> raw_param_vjp(const FilterId& filter, const Image& input,
                                  std::span<const double> params, const Image& upstream);
/// Derivative with respect to the input image along `tangent`; used to chain
/// stages, never exposed as an image-gradient API.
Image raw_input_jvp(const FilterId& filter, const Image& input, std::span<const double> params,
                    const Image& tangent);
/// Per value: 1 where the input lies within `margin` of a point at which the
/// output is not differentiable in the parameters (segment knots, the
/// transmission floor).
std::vector<char> kink_mask(const FilterId& filter, const Image& input,
                            std::span<const double> params, double margin);

// Per-family implementations behind the dispatchers above.
Image classical_param_jvp(const FilterId&, const Image&, std::span<const double>,
                          std::span<const double>);
std::vector<double> classical_param_vjp(const FilterId&, const Image&, std::span<const double>,
                                        const Image&);
Image classical_input_jvp(const FilterId&, const Image&, std::span<const double>, const Image&);
std::vector<char> classical_kink_mask(const FilterId&, const Image&, std::span<const double>,
                                      double);

Image unified_param_jvp(const FilterId&, const Image&, std::span<const double>,
                        std::span<const double>);
std::vector<double> unified_param_vjp(const FilterId&, const Image&, std::span<const double>,
                                      const Image&);
Image unified_input_jvp(const FilterId&, const Image&, std::span<const double>, const Image&);
std::vector<char> unified_kink_mask(const FilterId&, const Image&, std::span<const double>,
                                    double);

}  // namespace unifilt::detail
