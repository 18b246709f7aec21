#include "unifilt/fit.hpp"

#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "unifilt/grad.hpp"
#include "unifilt/rng.hpp"

namespace unifilt {

namespace {

double unit_span(const ParamSpec& s) {
  return s.scale == ParamScale::log ? std::log(s.max) - std::log(s.min) : s.max - s.min;
}

std::string format_double(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

}  // namespace

void FitConfig::validate() const {
  if (iterations < 1) throw std::invalid_argument("iterations must be at least 1");
  if (!(learning_rate > 0.0)) throw std::invalid_argument("learning_rate must be positive");
  if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0) || !(adam_beta2 >= 0.0 && adam_beta2 < 1.0)) {
    throw std::invalid_argument("adam betas must lie in [0, 1)");
  }
  if (!(adam_eps > 0.0)) throw std::invalid_argument("adam_eps must be positive");
  loss.validate();
}

nlohmann::json to_json(const FitConfig& cfg) {
  return {{"iterations", cfg.iterations},
          {"learning_rate", cfg.learning_rate},
          {"adam_beta1", cfg.adam_beta1},
          {"adam_beta2", cfg.adam_beta2},
          {"adam_eps", cfg.adam_eps},
          {"loss", {{"mse_weight", cfg.loss.mse_weight}, {"ssim_weight", cfg.loss.ssim_weight}}},
          {"param_init", cfg.param_init == ParamInit::neutral ? "neutral" : "random"},
          {"init_seed", cfg.init_seed},
          {"param_space", cfg.param_space == ParamSpace::unit ? "unit" : "raw"}};
}

FitConfig fit_config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("fit config must be a JSON object");
  FitConfig cfg;
  for (const auto& [key, value] : j.items()) {
    if (key == "iterations") {
      cfg.iterations = value.get<int>();
    } else if (key == "learning_rate") {
      cfg.learning_rate = value.get<double>();
    } else if (key == "adam_beta1") {
      cfg.adam_beta1 = value.get<double>();
    } else if (key == "adam_beta2") {
      cfg.adam_beta2 = value.get<double>();
    } else if (key == "adam_eps") {
      cfg.adam_eps = value.get<double>();
    } else if (key == "loss") {
      for (const auto& [lk, lv] : value.items()) {
        if (lk == "mse_weight") {
          cfg.loss.mse_weight = lv.get<double>();
        } else if (lk == "ssim_weight") {
          cfg.loss.ssim_weight = lv.get<double>();
        } else {
          throw std::invalid_argument("unknown loss key: " + lk);
        }
      }
    } else if (key == "param_init") {
      const auto s = value.get<std::string>();
      if (s == "neutral") {
        cfg.param_init = ParamInit::neutral;
      } else if (s == "random") {
        cfg.param_init = ParamInit::random;
      } else {
        throw std::invalid_argument("param_init must be neutral or random");
      }
    } else if (key == "param_space") {
      const auto s = value.get<std::string>();
      if (s == "unit") {
        cfg.param_space = ParamSpace::unit;
      } else if (s == "raw") {
        cfg.param_space = ParamSpace::raw;
      } else {
        throw std::invalid_argument("param_space must be unit or raw");
      }
    } else if (key == "init_seed") {
      cfg.init_seed = value.get<std::uint64_t>();
    } else {
      throw std::invalid_argument("unknown fit config key: " + key);
    }
  }
  cfg.validate();
  return cfg;
}

void adam_step(AdamState& state, std::span<double> params, std::span<const double> grad,
               const FitConfig& cfg, std::span<const double> lower,
               std::span<const double> upper) {
  const std::size_t n = params.size();
  if (grad.size() != n || state.m.size() != n || state.v.size() != n || lower.size() != n ||
      upper.size() != n) {
    throw std::invalid_argument("adam_step: dimension mismatch");
  }
  ++state.step;
  const double c1 = 1.0 - std::pow(cfg.adam_beta1, state.step);
  const double c2 = 1.0 - std::pow(cfg.adam_beta2, state.step);
  for (std::size_t i = 0; i < n; ++i) {
    state.m[i] = cfg.adam_beta1 * state.m[i] + (1.0 - cfg.adam_beta1) * grad[i];
    state.v[i] = cfg.adam_beta2 * state.v[i] + (1.0 - cfg.adam_beta2) * grad[i] * grad[i];
    const double m_hat = state.m[i] / c1;
    const double v_hat = state.v[i] / c2;
    params[i] -= cfg.learning_rate * m_hat / (std::sqrt(v_hat) + cfg.adam_eps);
    params[i] = std::clamp(params[i], lower[i], upper[i]);
  }
}

std::vector<double> to_unit(std::span<const ParamSpec> specs, std::span<const double> params) {
  std::vector<double> u(params.size());
  for (std::size_t i = 0; i < params.size(); ++i) {
    const auto& s = specs[i];
    u[i] = s.scale == ParamScale::log ? (std::log(params[i]) - std::log(s.min)) / unit_span(s)
                                      : (params[i] - s.min) / unit_span(s);
  }
  return u;
}

std::vector<double> from_unit(std::span<const ParamSpec> specs, std::span<const double> unit) {
  std::vector<double> p(unit.size());
  for (std::size_t i = 0; i < unit.size(); ++i) {
    const auto& s = specs[i];
    const double v = s.scale == ParamScale::log ? std::exp(std::log(s.min) + unit[i] * unit_span(s))
                                                : s.min + unit[i] * unit_span(s);
    p[i] = std::clamp(v, s.min, s.max);
  }
  return p;
}

FitResult fit_chain(const FilterChain& chain, const Image& source, const Image& target,
                    const FitConfig& cfg) {
  cfg.validate();
  if (!source.same_shape(target)) throw std::invalid_argument("fit: source/target shape mismatch");
  const auto start = std::chrono::steady_clock::now();
  const auto specs = chain.param_specs();
  const std::size_t n = specs.size();

  std::vector<double> params = chain.neutral_params();
  if (cfg.param_init == ParamInit::random) {
    Rng rng(cfg.init_seed);
    for (std::size_t i = 0; i < n; ++i) {
      const double u = rng.uniform();
      params[i] = from_unit(std::span(&specs[i], 1), std::span(&u, 1))[0];
    }
  }

  const FilterChain fixed = ChainTape(chain, source, params).resolved_chain();
  FitTrace trace;
  std::vector<double> best;
  double best_loss = 0.0;
  const bool raw_space = cfg.param_space == ParamSpace::raw;
  std::vector<double> coords = raw_space ? params : to_unit(specs, params);
  std::vector<double> lower(n, 0.0);
  std::vector<double> upper(n, 1.0);
  if (raw_space) {
    for (std::size_t i = 0; i < n; ++i) {
      lower[i] = specs[i].min;
      upper[i] = specs[i].max;
    }
  }
  AdamState state(n);

  for (int it = 0; it <= cfg.iterations; ++it) {
    params = raw_space ? coords : from_unit(specs, coords);
    const ChainTape tape(fixed, source, params);
    const LossEval e = evaluate_loss(tape.output(), target, cfg.loss);
    trace.entries.push_back({it, e.value, psnr(tape.output(), target)});
    if (it == 0 || e.value < best_loss) {
      best_loss = e.value;
      best = params;
    }
    if (it == cfg.iterations) break;
    std::vector<double> grad = tape.vjp(e.gradient);
    if (!raw_space) {
      for (std::size_t i = 0; i < n; ++i) {
        const double dp_du = specs[i].scale == ParamScale::log ? params[i] * unit_span(specs[i])
                                                               : unit_span(specs[i]);
        grad[i] *= dp_du;
      }
    }
    adam_step(state, coords, grad, cfg, lower, upper);
  }
  trace.final_params = best;
  trace.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  Image output = apply_chain(fixed, source, best);
  return FitResult{std::move(best), best_loss, std::move(trace), fixed, std::move(output)};
}

FitResult fit_filter(const FilterId& filter, const Image& source, const Image& target,
                     const FitConfig& cfg) {
  return fit_chain(FilterChain{{filter}}, source, target, cfg);
}

std::string trace_csv(const FitTrace& trace) {
  std::string out = "iteration,loss,psnr\n";
  for (const auto& e : trace.entries) {
    out += std::to_string(e.iteration) + "," + format_double(e.loss) + "," +
           format_double(e.psnr) + "\n";
  }
  return out;
}

nlohmann::json to_json(const FitTrace& trace) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : trace.entries) {
    entries.push_back({{"iteration", e.iteration}, {"loss", e.loss}, {"psnr", e.psnr}});
  }
  return {{"entries", std::move(entries)},
          {"final_params", trace.final_params},
          {"wall_seconds", trace.wall_seconds}};
}

}  // namespace unifilt
