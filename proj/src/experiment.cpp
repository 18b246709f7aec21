#include "unifilt/experiment.hpp"

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <stdexcept>

#include "unifilt/image_io.hpp"
#include "unifilt/metrics.hpp"
#include "unifilt/rng.hpp"

namespace unifilt {

namespace {

std::string fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10f", v);
  return buf;
}

void check_config(const ExperimentConfig& cfg) {
  cfg.fit.validate();
  degrade_preset(cfg.degrade, cfg.pixel_wise_order).validate();
  degrade_preset(cfg.optimize, cfg.pixel_wise_order).validate();
}

}  // namespace

nlohmann::json to_json(const ExperimentConfig& cfg) {
  nlohmann::json order = nlohmann::json::array();
  if (cfg.pixel_wise_order.empty()) {
    for (FilterKind k : kDefaultPixelWiseOrder) order.push_back(filter_name(k));
  } else {
    for (FilterKind k : cfg.pixel_wise_order) order.push_back(filter_name(k));
  }
  return {{"degrade", cfg.degrade},
          {"optimize", cfg.optimize},
          {"pixel_wise_order", std::move(order)},
          {"seed", cfg.seed},
          {"fit", to_json(cfg.fit)}};
}

Corpus load_corpus(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw std::invalid_argument("corpus directory not found: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && is_supported_image(entry.path())) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  Corpus corpus;
  for (const auto& f : files) {
    try {
      corpus.images.push_back({f.filename().string(), load_image(f)});
    } catch (const std::exception& e) {
      std::cerr << "warning: skipping " << f.string() << ": " << e.what() << "\n";
      corpus.skipped.push_back(f.filename().string());
    }
  }
  return corpus;
}

ExperimentRow run_single(const CorpusImage& item, const ExperimentConfig& cfg) {
  const DegradeChain degrade_chain = degrade_preset(cfg.degrade, cfg.pixel_wise_order);
  const DegradeChain optimize_chain = degrade_preset(cfg.optimize, cfg.pixel_wise_order);
  const auto params = sample_params(degrade_chain, derive_seed(cfg.seed, item.id));
  const Image target = degrade(item.image, degrade_chain, params);
  const FilterChain chain = optimize_chain.filters();

  ExperimentRow row;
  row.image_id = item.id;
  row.degrade = cfg.degrade;
  row.optimize = cfg.optimize;
  row.psnr_initial = psnr(item.image, target);
  const FitResult fit = fit_chain(chain, item.image, target, cfg.fit);
  row.psnr_final = psnr(fit.output, target);
  row.psnr_delta = row.psnr_final - row.psnr_initial;
  row.psnr_fit_start = fit.trace.entries.front().psnr;
  return row;
}

ExperimentResult mimicry_experiment(const Corpus& corpus, const ExperimentConfig& cfg) {
  check_config(cfg);
  if (corpus.images.empty()) throw std::invalid_argument("corpus contains no readable images");
  ExperimentResult result;
  result.rows.resize(corpus.images.size());
  const auto n = static_cast<std::ptrdiff_t>(corpus.images.size());
  std::vector<std::string> errors(corpus.images.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      result.rows[i] = run_single(corpus.images[i], cfg);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  }
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (!errors[i].empty()) {
      throw std::runtime_error("experiment failed on " + corpus.images[i].id + ": " + errors[i]);
    }
  }

  ExperimentSummary& s = result.summary;
  s.degrade = cfg.degrade;
  s.optimize = cfg.optimize;
  s.n_images = result.rows.size();
  s.skipped = corpus.skipped.size();
  for (const auto& r : result.rows) {
    s.mean_initial += r.psnr_initial;
    s.mean_final += r.psnr_final;
    s.mean_delta += r.psnr_delta;
  }
  const double count = static_cast<double>(s.n_images);
  s.mean_initial /= count;
  s.mean_final /= count;
  s.mean_delta /= count;
  s.config_echo = to_json(cfg);
  return result;
}

ExperimentResult mimicry_experiment(const std::filesystem::path& dir,
                                    const ExperimentConfig& cfg) {
  return mimicry_experiment(load_corpus(dir), cfg);
}

std::string rows_csv(const std::vector<ExperimentRow>& rows) {
  std::string out = "image_id,degrade,optimize,psnr_initial,psnr_final,psnr_delta\n";
  for (const auto& r : rows) {
    out += r.image_id + "," + r.degrade + "," + r.optimize + "," + fixed(r.psnr_initial) + "," +
           fixed(r.psnr_final) + "," + fixed(r.psnr_delta) + "\n";
  }
  return out;
}

nlohmann::json to_json(const ExperimentSummary& summary) {
  return {{"degrade", summary.degrade},
          {"optimize", summary.optimize},
          {"n_images", summary.n_images},
          {"skipped", summary.skipped},
          {"mean_initial", summary.mean_initial},
          {"mean_final", summary.mean_final},
          {"mean_delta", summary.mean_delta},
          {"config_echo", summary.config_echo}};
}

}  // namespace unifilt
