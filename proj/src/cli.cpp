#include "unifilt/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "unifilt/augment.hpp"
#include "unifilt/experiment.hpp"
#include "unifilt/fit.hpp"
#include "unifilt/grad.hpp"
#include "unifilt/image_io.hpp"
#include "unifilt/rng.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace unifilt {

namespace {

// Settings shared by all subcommands, filled from --config then overridden by
// explicit flags.
struct Settings {
  std::uint64_t seed = 0;
  std::string out_dir;
  std::string config_path;

  FitConfig fit;
  std::string degrade = "pixel_wise";
  std::string optimize = "bpw";
  std::vector<FilterKind> pixel_wise_order;
  std::string augment_box = "full";
  int segments = kDefaultBpwSegments;
  int ksize = kDefaultKblKernelSide;
};

void load_config(Settings& s) {
  if (s.config_path.empty()) return;
  std::ifstream in(s.config_path);
  if (!in) throw std::runtime_error("cannot open config: " + s.config_path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw std::runtime_error("invalid config JSON: " + std::string(e.what()));
  }
  if (!j.is_object()) throw std::runtime_error("config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "fit") {
      s.fit = fit_config_from_json(value);
    } else if (key == "degrade") {
      s.degrade = value.get<std::string>();
    } else if (key == "optimize") {
      s.optimize = value.get<std::string>();
    } else if (key == "pixel_wise_order") {
      s.pixel_wise_order.clear();
      for (const auto& name : value) s.pixel_wise_order.push_back(parse_filter_kind(name.get<std::string>()));
    } else if (key == "augment_box") {
      s.augment_box = value.get<std::string>();
    } else if (key == "segments") {
      s.segments = value.get<int>();
    } else if (key == "ksize") {
      s.ksize = value.get<int>();
    } else if (key == "seed") {
      s.seed = value.get<std::uint64_t>();
    } else {
      throw std::runtime_error("unknown config key: " + key);
    }
  }
}

fs::path output_path(const Settings& s, const fs::path& name) {
  if (s.out_dir.empty() || name.is_absolute()) return name;
  return fs::path(s.out_dir) / name;
}

void ensure_parent(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
}

void write_text(const fs::path& p, const std::string& text) {
  ensure_parent(p);
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << text;
  if (!out) throw std::runtime_error("failed writing " + p.string());
}

void write_json(const fs::path& p, const json& j) { write_text(p, j.dump(2) + "\n"); }

FilterId make_filter(const std::string& name, const Settings& s) {
  FilterId id = FilterId::of(parse_filter_kind(name));
  id.segments = s.segments;
  id.ksize = s.ksize;
  id.validate();
  return id;
}

// A single filter name or a chain preset.
FilterChain make_chain(const std::string& name, const Settings& s) {
  for (const auto& preset : preset_names()) {
    if (preset == name) return degrade_preset(name, s.pixel_wise_order).filters();
  }
  return FilterChain{{make_filter(name, s)}};
}

std::vector<FilterKind> parse_order(const std::string& text) {
  std::vector<FilterKind> order;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) order.push_back(parse_filter_kind(item));
  return order;
}

json registry_json(const Settings& s) {
  json filters = json::array();
  for (FilterKind k : kAllFilterKinds) {
    FilterId id = FilterId::of(k);
    id.segments = s.segments;
    id.ksize = s.ksize;
    json params = json::array();
    for (const auto& p : param_specs(id)) {
      params.push_back({{"name", p.name},
                        {"min", p.min},
                        {"max", p.max},
                        {"neutral", p.neutral},
                        {"scale", p.scale == ParamScale::log ? "log" : "linear"}});
    }
    filters.push_back({{"name", filter_name(k)}, {"arity", param_count(id)}, {"params", params}});
  }
  json presets = json::object();
  for (const auto& name : preset_names()) {
    json stages = json::array();
    for (const auto& st : degrade_preset(name, s.pixel_wise_order).stages) {
      stages.push_back(filter_name(st.filter.kind));
    }
    presets[name] = stages;
  }
  return {{"filters", filters}, {"presets", presets}};
}

// Interior point for the finite-difference oracle: 5% of the span away from
// each bound.
std::vector<double> interior_params(const FilterId& id, Rng& rng) {
  const auto specs = param_specs(id);
  std::vector<Interval> box;
  for (const auto& p : specs) {
    if (p.scale == ParamScale::log) {
      const double span = std::log(p.max) - std::log(p.min);
      box.push_back({std::exp(std::log(p.min) + 0.05 * span), std::exp(std::log(p.max) - 0.05 * span)});
    } else {
      const double span = p.max - p.min;
      box.push_back({p.min + 0.05 * span, p.max - 0.05 * span});
    }
  }
  return sample_box(specs, box, rng);
}

int cmd_apply(const Settings& s, const std::string& filter, const std::vector<double>& params,
              const std::string& in, const std::string& out) {
  const FilterId id = make_filter(filter, s);
  const Image src = load_image(in);
  const Image result = apply_filter(id, src, params);
  const fs::path dst = output_path(s, out);
  ensure_parent(dst);
  save_image(result, dst);
  std::cout << "wrote " << dst.string() << "\n";
  return 0;
}

int cmd_fit(Settings s, const std::string& filter, const std::string& source,
            const std::string& target) {
  s.fit.init_seed = s.seed;
  const FilterChain chain = make_chain(filter, s);
  const Image src = load_image(source);
  const Image tgt = load_image(target);
  const FitResult fit = fit_chain(chain, src, tgt, s.fit);

  const auto specs = fit.chain.param_specs();
  json params = json::object();
  for (std::size_t i = 0; i < specs.size(); ++i) params[specs[i].name] = fit.params[i];
  json out = {{"chain", chain.describe()},
              {"params", params},
              {"param_vector", fit.params},
              {"loss", fit.loss},
              {"psnr", psnr(fit.output, tgt)},
              {"config", to_json(s.fit)},
              {"trace", to_json(fit.trace)}};
  write_text(output_path(s, "trace.csv"), trace_csv(fit.trace));
  write_json(output_path(s, "params.json"), out);
  const fs::path img = output_path(s, "output.png");
  ensure_parent(img);
  save_image(fit.output, img);
  std::cout << chain.describe() << ": loss " << fit.loss << ", psnr " << psnr(fit.output, tgt)
            << " dB\n";
  return 0;
}

int cmd_experiment(const Settings& s, const std::string& corpus) {
  ExperimentConfig cfg;
  cfg.degrade = s.degrade;
  cfg.optimize = s.optimize;
  cfg.pixel_wise_order = s.pixel_wise_order;
  cfg.fit = s.fit;
  cfg.seed = s.seed;
  const ExperimentResult r = mimicry_experiment(fs::path(corpus), cfg);
  write_text(output_path(s, "rows.csv"), rows_csv(r.rows));
  write_json(output_path(s, "summary.json"), to_json(r.summary));
  std::cout << cfg.degrade << " -> " << cfg.optimize << ": " << r.summary.n_images
            << " images, initial " << r.summary.mean_initial << " dB, final "
            << r.summary.mean_final << " dB, delta " << r.summary.mean_delta << " dB";
  if (r.summary.skipped > 0) std::cout << " (" << r.summary.skipped << " skipped)";
  std::cout << "\n";
  return 0;
}

int cmd_augment(const Settings& s, const std::string& in_dir) {
  const Corpus corpus = load_corpus(in_dir);
  if (corpus.images.empty()) throw std::runtime_error("no readable images in " + in_dir);
  const fs::path dir = s.out_dir.empty() ? fs::path("augmented") : fs::path(s.out_dir);
  fs::create_directories(dir);
  AugmentSpec spec;
  spec.box = augment_box(s.augment_box);
  spec.segments = s.segments;
  for (const auto& item : corpus.images) {
    spec.seed = derive_seed(s.seed, item.id);
    const fs::path dst = dir / (fs::path(item.id).stem().string() + ".png");
    save_image(bpw_augment(item.image, spec), dst);
  }
  std::cout << "augmented " << corpus.images.size() << " images into " << dir.string() << "\n";
  return corpus.skipped.empty() ? 0 : 1;
}

int cmd_gradcheck(const Settings& s, int size, int images, int points, double eps) {
  if (size < 1 || images < 1 || points < 1) throw std::runtime_error("gradcheck counts must be positive");
  Rng rng(s.seed);
  json reports = json::array();
  bool all_pass = true;
  for (FilterKind k : kAllFilterKinds) {
    const FilterId id = make_filter(std::string(filter_name(k)), s);
    double worst = 0.0;
    bool pass = true;
    for (int i = 0; i < images; ++i) {
      const Image img = random_image(size, size, rng);
      for (int p = 0; p < points; ++p) {
        const auto params = interior_params(id, rng);
        const GradReport rep = finite_diff_check(id, img, params, eps);
        worst = std::max(worst, rep.max_rel_error);
        pass = pass && rep.pass;
        json j = to_json(rep);
        j["image"] = i;
        j["point"] = p;
        j["param_values"] = params;
        reports.push_back(std::move(j));
      }
    }
    all_pass = all_pass && pass;
    std::cout << filter_name(k) << ": max rel error " << worst << (pass ? " PASS" : " FAIL") << "\n";
  }
  write_json(output_path(s, "gradcheck.json"), {{"size", size},
                                                {"seed", s.seed},
                                                {"eps", eps},
                                                {"tolerance", kGradCheckTolerance},
                                                {"pass", all_pass},
                                                {"reports", reports}});
  return all_pass ? 0 : 1;
}

void add_common(CLI::App* cmd, Settings& s) {
  cmd->add_option("--seed", s.seed, "Random seed");
  cmd->add_option("--out-dir", s.out_dir, "Directory for outputs");
  cmd->add_option("--config", s.config_path, "JSON config file")->check(CLI::ExistingFile);
}

}  // namespace

int run_cli(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args);
}

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"Differentiable image filters: apply, fit, mimicry experiments, augmentation"};
  app.require_subcommand(1);
  Settings s;

  std::string filter, in, out, source, target, corpus, in_dir, order;
  std::vector<double> params;
  std::optional<int> iterations;
  std::optional<double> lr;
  std::optional<std::string> degrade, optimize, box;
  std::optional<int> segments, ksize;
  int size = 16, images = 1, points = 1;
  double eps = kDefaultFiniteDiffEps;

  auto* apply = app.add_subcommand("apply", "Filter one image with explicit parameters");
  add_common(apply, s);
  apply->add_option("--filter", filter, "Filter name")->required();
  apply->add_option("--params", params, "Parameter values")->delimiter(',');
  apply->add_option("--in", in, "Input image")->required()->check(CLI::ExistingFile);
  apply->add_option("--out", out, "Output PNG")->required();

  auto* fit = app.add_subcommand("fit", "Fit a filter or preset chain to a source/target pair");
  add_common(fit, s);
  fit->add_option("--filter", filter, "Filter or preset name")->required();
  fit->add_option("--source", source, "Source image")->required()->check(CLI::ExistingFile);
  fit->add_option("--target", target, "Target image")->required()->check(CLI::ExistingFile);

  auto* exp = app.add_subcommand("experiment", "Mimicry experiment over a corpus");
  add_common(exp, s);
  exp->add_option("--degrade", degrade, "Degrade preset");
  exp->add_option("--optimize", optimize, "Optimize preset");
  exp->add_option("--corpus", corpus, "Image directory")->required()->check(CLI::ExistingDirectory);

  auto* aug = app.add_subcommand("augment", "BPW augmentation of a directory");
  add_common(aug, s);
  aug->add_option("--in-dir", in_dir, "Input directory")->required()->check(CLI::ExistingDirectory);
  aug->add_option("--box", box, "Parameter box: full, low_light, fog, neutral");

  auto* grad = app.add_subcommand("gradcheck", "Finite-difference check of every filter");
  add_common(grad, s);
  grad->add_option("--size", size, "Image side");
  grad->add_option("--images", images, "Random images per filter");
  grad->add_option("--points", points, "Parameter points per image");
  grad->add_option("--eps", eps, "Central difference step");

  auto* reg = app.add_subcommand("registry", "Print the parameter registry as JSON");
  add_common(reg, s);

  for (auto* cmd : {apply, fit, exp, aug, grad, reg}) {
    cmd->add_option("--segments", segments, "Tone/BPW segment count");
    cmd->add_option("--ksize", ksize, "KBL kernel side");
  }
  for (auto* cmd : {fit, exp}) {
    cmd->add_option("--iterations", iterations, "Adam iterations");
    cmd->add_option("--lr", lr, "Adam learning rate");
    cmd->add_option("--order", order, "pixel_wise stage order, comma separated");
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    // Flags beat the config file, which beats defaults.
    const std::uint64_t flag_seed = s.seed;
    const bool seed_given = app.get_subcommands().front()->count("--seed") > 0;
    load_config(s);
    if (seed_given) s.seed = flag_seed;
    if (iterations) s.fit.iterations = *iterations;
    if (lr) s.fit.learning_rate = *lr;
    if (degrade) s.degrade = *degrade;
    if (optimize) s.optimize = *optimize;
    if (box) s.augment_box = *box;
    if (segments) s.segments = *segments;
    if (ksize) s.ksize = *ksize;
    if (!order.empty()) s.pixel_wise_order = parse_order(order);
    s.fit.validate();

    if (*apply) return cmd_apply(s, filter, params, in, out);
    if (*fit) return cmd_fit(s, filter, source, target);
    if (*exp) return cmd_experiment(s, corpus);
    if (*aug) return cmd_augment(s, in_dir);
    if (*grad) return cmd_gradcheck(s, size, images, points, eps);
    if (*reg) {
      const json j = registry_json(s);
      if (s.out_dir.empty()) {
        std::cout << j.dump(2) << "\n";
      } else {
        write_json(output_path(s, "registry.json"), j);
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace unifilt
