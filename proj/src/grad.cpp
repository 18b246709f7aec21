#include "unifilt/grad.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "unifilt/detail/derivatives.hpp"
#include "unifilt/detail/parallel.hpp"

namespace unifilt {

namespace detail {

namespace {

bool is_unified(FilterKind kind) { return kind == FilterKind::bpw || kind == FilterKind::kbl; }

}  // namespace

Image raw_param_jvp(const FilterId& filter, const Image& input, std::span<const double> params,
                    std::span<const double> direction) {
  return is_unified(filter.kind) ? unified_param_jvp(filter, input, params, direction)
                                 : classical_param_jvp(filter, input, params, direction);
}

std::vector<double> raw_param_vjp(const FilterId& filter, const Image& input,
                                  std::span<const double> params, const Image& upstream) {
  return is_unified(filter.kind) ? unified_param_vjp(filter, input, params, upstream)
                                 : classical_param_vjp(filter, input, params, upstream);
}

Image raw_input_jvp(const FilterId& filter, const Image& input, std::span<const double> params,
                    const Image& tangent) {
  return is_unified(filter.kind) ? unified_input_jvp(filter, input, params, tangent)
                                 : classical_input_jvp(filter, input, params, tangent);
}

std::vector<char> kink_mask(const FilterId& filter, const Image& input,
                            std::span<const double> params, double margin) {
  return is_unified(filter.kind) ? unified_kink_mask(filter, input, params, margin)
                                 : classical_kink_mask(filter, input, params, margin);
}

}  // namespace detail

namespace {

// Clamp derivative: 1 on [0, 1), 0 elsewhere.
bool passes_clamp(double raw) { return raw >= 0.0 && raw < 1.0; }

void mask_by_clamp(Image& values, const Image& raw) {
  auto v = values.values();
  const auto r = raw.values();
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!passes_clamp(r[i])) v[i] = 0.0;
  }
}

void check_shape(const Image& a, const Image& b, const char* what) {
  if (!a.same_shape(b)) throw std::invalid_argument(std::string(what) + ": image shape mismatch");
}

double dot(std::span<const double> a, std::span<const double> b) {
  const auto s = detail::blocked_sum(a.size(), 1, [&](std::size_t i, double* acc) {
    acc[0] += a[i] * b[i];
  });
  return s[0];
}

FilterId with_resolved_light(FilterId filter, const Image& input) {
  if (filter.kind == FilterKind::defog && !filter.defog.atmospheric_light) {
    filter.defog.atmospheric_light = estimate_atmospheric_light(input, filter.defog.window);
  }
  return filter;
}

}  // namespace

ChainTape::ChainTape(FilterChain chain, const Image& image, std::span<const double> params)
    : chain_(std::move(chain)), params_(params.begin(), params.end()) {
  if (chain_.stages.empty()) throw std::invalid_argument("filter chain is empty");
  const auto parts = chain_.split(params_);
  std::size_t offset = 0;
  Image current = image;
  for (std::size_t k = 0; k < chain_.stages.size(); ++k) {
    chain_.stages[k] = with_resolved_light(chain_.stages[k], current);
    offsets_.push_back(offset);
    offset += parts[k].size();
    Image raw = apply_filter_raw(chain_.stages[k], current, parts[k]);
    Image out = clamp01(raw);
    inputs_.push_back(std::move(current));
    raws_.push_back(std::move(raw));
    current = out;
    outputs_.push_back(std::move(out));
  }
}

Image ChainTape::stage_jvp(std::size_t first_stage, std::span<const double> direction) const {
  const auto parts = chain_.split(params_);
  const auto dir_parts = chain_.split(direction);
  std::optional<Image> tangent;
  for (std::size_t k = first_stage; k < chain_.stages.size(); ++k) {
    const FilterId& stage = chain_.stages[k];
    const bool moves = std::any_of(dir_parts[k].begin(), dir_parts[k].end(),
                                   [](double d) { return d != 0.0; });
    Image t(inputs_[k].height(), inputs_[k].width());
    if (tangent) t = detail::raw_input_jvp(stage, inputs_[k], parts[k], *tangent);
    if (moves) {
      const Image dp = detail::raw_param_jvp(stage, inputs_[k], parts[k], dir_parts[k]);
      auto tv = t.values();
      const auto dv = dp.values();
      for (std::size_t i = 0; i < tv.size(); ++i) tv[i] += dv[i];
    }
    mask_by_clamp(t, raws_[k]);
    tangent = std::move(t);
  }
  return std::move(*tangent);
}

Image ChainTape::jvp(std::span<const double> direction) const {
  if (direction.size() != params_.size()) {
    throw std::invalid_argument("jvp direction length does not match parameter count");
  }
  std::size_t first = chain_.stages.size() - 1;
  for (std::size_t k = 0; k < chain_.stages.size(); ++k) {
    const auto n = unifilt::param_count(chain_.stages[k]);
    const auto part = direction.subspan(offsets_[k], n);
    if (std::any_of(part.begin(), part.end(), [](double d) { return d != 0.0; })) {
      first = k;
      break;
    }
  }
  return stage_jvp(first, direction);
}

std::vector<double> ChainTape::vjp(const Image& upstream) const {
  check_shape(upstream, output(), "vjp upstream");
  std::vector<double> grad(params_.size(), 0.0);
  const auto parts = chain_.split(params_);

  // Last stage: direct adjoint.
  const std::size_t last = chain_.stages.size() - 1;
  Image masked = upstream;
  mask_by_clamp(masked, raws_[last]);
  const auto g_last = detail::raw_param_vjp(chain_.stages[last], inputs_[last], parts[last], masked);
  std::copy(g_last.begin(), g_last.end(), grad.begin() + static_cast<std::ptrdiff_t>(offsets_[last]));

  // Earlier stages: one forward tangent per parameter, contracted with the
  // upstream. Exact, and cheap for the short classical chains.
  std::vector<double> direction(params_.size(), 0.0);
  for (std::size_t k = 0; k < last; ++k) {
    for (std::size_t j = 0; j < parts[k].size(); ++j) {
      const std::size_t i = offsets_[k] + j;
      direction[i] = 1.0;
      const Image t = stage_jvp(k, direction);
      grad[i] = dot(upstream.values(), t.values());
      direction[i] = 0.0;
    }
  }
  return grad;
}

Jvp param_jvp(const FilterId& filter, const Image& image, std::span<const double> params,
              std::span<const double> direction) {
  if (direction.size() != params.size()) {
    throw std::invalid_argument("jvp direction length does not match parameter count");
  }
  ChainTape tape(FilterChain{{filter}}, image, params);
  Jvp result{tape.jvp(direction), {}};
  const auto specs = param_specs(filter);
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (params[i] <= specs[i].min || params[i] >= specs[i].max) {
      result.boundary_params.push_back(i);
    }
  }
  return result;
}

std::vector<double> param_vjp(const FilterId& filter, const Image& image,
                              std::span<const double> params, const Image& upstream) {
  ChainTape tape(FilterChain{{filter}}, image, params);
  return tape.vjp(upstream);
}

nlohmann::json to_json(const GradReport& report) {
  nlohmann::json params = nlohmann::json::array();
  for (const auto& p : report.params) {
    params.push_back({{"name", p.name},
                      {"analytic", p.analytic},
                      {"numeric", p.numeric},
                      {"abs_error", p.abs_error},
                      {"rel_error", p.rel_error},
                      {"compared", p.compared},
                      {"excluded", p.excluded}});
  }
  return {{"filter", report.filter},
          {"eps", report.eps},
          {"tolerance", kGradCheckTolerance},
          {"max_rel_error", report.max_rel_error},
          {"pass", report.pass},
          {"params", std::move(params)}};
}

GradReport finite_diff_check(const FilterId& filter, const Image& image,
                             std::span<const double> params, double eps) {
  check_params(filter, params);
  const FilterId resolved = with_resolved_light(filter, image);
  const ChainTape tape(FilterChain{{resolved}}, image, params);
  return finite_diff_check(resolved, image, params, eps,
                           [&](std::span<const double> dir) { return tape.jvp(dir); });
}

GradReport finite_diff_check(const FilterId& filter, const Image& image,
                             std::span<const double> params, double eps, const JvpFn& analytic) {
  if (!(eps > 0.0)) throw std::invalid_argument("finite difference eps must be positive");
  check_params(filter, params);
  const auto specs = param_specs(filter);
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (params[i] - specs[i].min < eps || specs[i].max - params[i] < eps) {
      throw std::invalid_argument("parameter " + specs[i].name +
                                  " is within eps of its range boundary");
    }
  }
  const FilterId resolved = with_resolved_light(filter, image);
  const Image base = apply_filter_raw(resolved, image, params);
  const std::vector<char> kinks = detail::kink_mask(resolved, image, params, 2.0 * eps);

  GradReport report;
  report.filter = std::string(filter_name(filter.kind));
  report.eps = eps;
  std::vector<double> shifted(params.begin(), params.end());
  std::vector<double> direction(params.size(), 0.0);
  for (std::size_t k = 0; k < params.size(); ++k) {
    shifted[k] = params[k] + eps;
    const Image plus = apply_filter_raw(resolved, image, shifted);
    shifted[k] = params[k] - eps;
    const Image minus = apply_filter_raw(resolved, image, shifted);
    shifted[k] = params[k];
    direction[k] = 1.0;
    const Image an = analytic(direction);
    direction[k] = 0.0;

    ParamCheck check;
    check.name = specs[k].name;
    const auto b = base.values();
    const auto pv = plus.values();
    const auto mv = minus.values();
    const auto av = an.values();
    for (std::size_t i = 0; i < b.size(); ++i) {
      if (kinks[i] != 0 || !passes_clamp(b[i]) || !passes_clamp(pv[i]) || !passes_clamp(mv[i])) {
        ++check.excluded;
        continue;
      }
      ++check.compared;
      const double fd = (pv[i] - mv[i]) / (2.0 * eps);
      const double abs_err = std::abs(av[i] - fd);
      const double rel_err = abs_err / std::max({std::abs(av[i]), std::abs(fd), 1e-8});
      check.abs_error = std::max(check.abs_error, abs_err);
      if (rel_err > check.rel_error || check.compared == 1) {
        check.rel_error = std::max(check.rel_error, rel_err);
        check.analytic = av[i];
        check.numeric = fd;
      }
    }
    report.max_rel_error = std::max(report.max_rel_error, check.rel_error);
    report.params.push_back(std::move(check));
  }
  report.pass = report.max_rel_error < kGradCheckTolerance;
  return report;
}

}  // namespace unifilt
