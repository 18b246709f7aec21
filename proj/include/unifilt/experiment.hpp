#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "unifilt/degrade.hpp"
#include "unifilt/fit.hpp"

namespace unifilt {

struct ExperimentConfig {
  std::string degrade = "pixel_wise";
  std::string optimize = "bpw";
  /// Order of the pixel_wise stages, used by both degrade and optimize.
  std::vector<FilterKind> pixel_wise_order;
  FitConfig fit;
  std::uint64_t seed = 0;
};

nlohmann::json to_json(const ExperimentConfig& cfg);

struct ExperimentRow {
  std::string image_id;
  std::string degrade;
  std::string optimize;
  /// Original vs degraded.
  double psnr_initial = 0.0;
  /// Optimized vs degraded.
  double psnr_final = 0.0;
  double psnr_delta = 0.0;
  /// Optimize chain at its initial parameters vs degraded.
  double psnr_fit_start = 0.0;
};

struct ExperimentSummary {
  std::string degrade;
  std::string optimize;
  std::size_t n_images = 0;
  std::size_t skipped = 0;
  double mean_initial = 0.0;
  double mean_final = 0.0;
  double mean_delta = 0.0;
  nlohmann::json config_echo;
};

struct ExperimentResult {
  std::vector<ExperimentRow> rows;
  ExperimentSummary summary;
};

struct CorpusImage {
  std::string id;
  Image image;
};

struct Corpus {
  std::vector<CorpusImage> images;
  std::vector<std::string> skipped;
};

/// Supported images of `dir`, sorted by file name. Unreadable files are
/// reported on stderr and listed in `skipped`.
Corpus load_corpus(const std::filesystem::path& dir);

ExperimentRow run_single(const CorpusImage& item, const ExperimentConfig& cfg);
/// Rows come back in corpus order regardless of scheduling.
ExperimentResult mimicry_experiment(const Corpus& corpus, const ExperimentConfig& cfg);
ExperimentResult mimicry_experiment(const std::filesystem::path& dir, const ExperimentConfig& cfg);

std::string rows_csv(const std::vector<ExperimentRow>& rows);
nlohmann::json to_json(const ExperimentSummary& summary);

}  // namespace unifilt
