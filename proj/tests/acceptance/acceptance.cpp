// Acceptance suite: one PASS/FAIL line per criterion, exit 1 if any fail.
// Usage: acceptance CORPUS_DIR [criterion numbers...]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "unifilt/augment.hpp"
#include "unifilt/cli.hpp"
#include "unifilt/degrade.hpp"
#include "unifilt/experiment.hpp"
#include "unifilt/fit.hpp"
#include "unifilt/grad.hpp"
#include "unifilt/rng.hpp"
#include "unifilt/unified.hpp"

using namespace unifilt;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::vector<double> interior(const FilterId& id, Rng& rng) {
  std::vector<double> p;
  for (const auto& s : param_specs(id)) {
    const double span = s.max - s.min;
    p.push_back(rng.uniform(s.min + 0.05 * span, s.max - 0.05 * span));
  }
  return p;
}

double max_abs_diff(const Image& a, const Image& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
  return m;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Image gray_ramp(int n) {
  Image img(1, n);
  for (int x = 0; x < n; ++x) {
    for (int c = 0; c < 3; ++c) img.at(0, x, c) = static_cast<double>(x) / (n - 1);
  }
  return img;
}

std::vector<double> random_bpw(Rng& rng) {
  std::vector<double> v(kBpwParamCount);
  for (double& x : v) x = rng.uniform(-1.0, 1.0);
  return v;
}

double bezier_exact(double x, Point2 p1, Point2 p2) {
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (lo + hi);
    (bezier_point(mid, p1, p2).x < x ? lo : hi) = mid;
  }
  return bezier_point(0.5 * (lo + hi), p1, p2).y;
}

Outcome identity_suite(const Corpus&) {
  Rng rng(1);
  const Image img = random_image(64, 64, rng);
  double worst = 0.0, worst_bpw = 0.0;
  for (FilterKind k : kAllFilterKinds) {
    const FilterId id = FilterId::of(k);
    const double e = max_abs_diff(apply_filter(id, img, neutral_params(id)), img);
    (k == FilterKind::bpw ? worst_bpw : worst) = std::max(k == FilterKind::bpw ? worst_bpw : worst, e);
  }
  return {worst <= 1e-6 && worst_bpw <= 1e-9,
          "max error " + fmt("%.2e", worst) + ", bpw " + fmt("%.2e", worst_bpw)};
}

Outcome gradient_oracle(const Corpus&) {
  Rng rng(2);
  double worst = 0.0;
  bool pass = true;
  std::string failed;
  for (FilterKind k : kAllFilterKinds) {
    const FilterId id = FilterId::of(k);
    for (int i = 0; i < 5; ++i) {
      const Image img = random_image(16, 16, rng);
      for (int p = 0; p < 3; ++p) {
        const GradReport r = finite_diff_check(id, img, interior(id, rng));
        worst = std::max(worst, r.max_rel_error);
        if (!r.pass) {
          pass = false;
          failed += " " + r.filter;
        }
      }
    }
  }
  return {pass, "max rel error " + fmt("%.2e", worst) + (failed.empty() ? "" : ", failed:" + failed)};
}

Outcome adjoint_identity(const Corpus&) {
  Rng rng(3);
  double worst = 0.0;
  for (FilterKind k : kAllFilterKinds) {
    const FilterId id = FilterId::of(k);
    for (int t = 0; t < 20; ++t) {
      const Image img = random_image(16, 16, rng);
      const auto p = interior(id, rng);
      Image u(16, 16);
      for (double& x : u.values()) x = rng.uniform(-1.0, 1.0);
      std::vector<double> v(p.size());
      for (double& x : v) x = rng.uniform(-1.0, 1.0);
      const double lhs = dot(u.values(), param_jvp(id, img, p, v).tangent.values());
      const double rhs = dot(param_vjp(id, img, p, u), v);
      worst = std::max(worst, std::abs(lhs - rhs) / std::max({std::abs(lhs), std::abs(rhs), 1e-12}));
    }
  }
  return {worst <= 1e-8, "max relative gap " + fmt("%.2e", worst)};
}

Outcome bezier_oracle(const Corpus&) {
  Rng rng(4);
  const Image ramp = gray_ramp(1024);
  double worst8 = 0.0, worst32 = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto v = random_bpw(rng);
    for (int segments : {8, 32}) {
      const BpwParams p = BpwParams::from_vector(v, segments);
      const Image out = bpw_filter(ramp, p);
      double& worst = segments == 8 ? worst8 : worst32;
      for (int c = 0; c < 3; ++c) {
        const auto& ch = p.channels[c];
        const auto [p1, p2] = bpw_control_points(ch.theta1, ch.r1, ch.theta2, ch.r2);
        for (int x = 0; x < 1024; ++x) {
          worst = std::max(worst, std::abs(out.at(0, x, c) - bezier_exact(ramp.at(0, x, c), p1, p2)));
        }
      }
    }
  }
  return {worst8 < 0.01 && worst32 < 0.002,
          "L=8 " + fmt("%.2e", worst8) + ", L=32 " + fmt("%.2e", worst32)};
}

Outcome monotonicity(const Corpus&) {
  Rng rng(5);
  const Image ramp = gray_ramp(1024);
  int bad = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Image out = bpw_filter(ramp, BpwParams::from_vector(random_bpw(rng)));
    bool ok = true;
    for (int c = 0; c < 3; ++c) {
      ok = ok && out.at(0, 0, c) == 0.0 && out.at(0, 1023, c) == 1.0;
      for (int x = 1; x < 1024; ++x) ok = ok && out.at(0, x, c) >= out.at(0, x - 1, c);
    }
    bad += !ok;
  }
  return {bad == 0, std::to_string(1000 - bad) + "/1000 monotone with exact endpoints"};
}

Outcome self_recovery(const Corpus& corpus) {
  DegradeChain gamma;
  gamma.name = "gamma";
  gamma.stages.push_back({FilterId::of(FilterKind::gamma), {}});
  const std::pair<std::string, DegradeChain> families[] = {
      {"gamma", gamma}, {"bpw", degrade_preset("bpw")}, {"kbl", degrade_preset("kbl")}};
  bool pass = true;
  std::string detail;
  const std::size_t trials = std::min<std::size_t>(20, corpus.images.size());
  for (const auto& [name, chain] : families) {
    std::vector<int> hit(trials, 0);
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(trials); ++i) {
      const auto& item = corpus.images[i];
      const auto params = sample_params(chain, derive_seed(1, name + "/" + item.id));
      const Image target = degrade(item.image, chain, params);
      const FitResult r = fit_chain(chain.filters(), item.image, target, FitConfig{});
      hit[i] = psnr(r.output, target) >= 35.0;
    }
    const int n = std::count(hit.begin(), hit.end(), 1);
    pass = pass && trials == 20 && n >= 18;
    detail += (detail.empty() ? "" : ", ") + name + " " + std::to_string(n) + "/" +
              std::to_string(trials);
  }
  return {pass, detail + " at >= 35 dB (need 18/20 each)"};
}

Outcome mimicry_trends(const Corpus& corpus) {
  struct Row {
    const char* degrade;
    const char* optimize;
    double bound;
    bool at_least;
  };
  const Row rows[] = {{"pixel_wise", "bpw", 5.0, true},
                      {"bpw", "pixel_wise", 5.0, true},
                      {"sharp_defog", "kbl", 4.0, true},
                      {"kbl", "sharp_defog", 1.5, false}};
  bool pass = true;
  std::string detail;
  for (const Row& row : rows) {
    ExperimentConfig cfg;
    cfg.degrade = row.degrade;
    cfg.optimize = row.optimize;
    cfg.seed = 1;
    const ExperimentSummary s = mimicry_experiment(corpus, cfg).summary;
    const bool ok = row.at_least ? s.mean_delta >= row.bound : s.mean_delta <= row.bound;
    pass = pass && ok;
    detail += std::string(detail.empty() ? "" : "; ") + row.degrade + "->" + row.optimize + " " +
              fmt("%+.2f dB", s.mean_delta) + (row.at_least ? " (>= " : " (<= ") +
              fmt("%.1f", row.bound) + (ok ? ")" : ", missed)");
  }
  return {pass, detail};
}

double lum_stat(const Image& img, bool want_std) {
  const Plane l = luminance(img);
  double s = 0.0, ss = 0.0;
  for (double v : l.values) {
    s += v;
    ss += v * v;
  }
  const double n = static_cast<double>(l.values.size());
  const double mean = s / n;
  return want_std ? std::sqrt(std::max(0.0, ss / n - mean * mean)) : mean;
}

Outcome augmentation_stats(const Corpus& corpus) {
  int darker = 0, flatter = 0;
  const int n = static_cast<int>(corpus.images.size());
  for (const auto& item : corpus.images) {
    AugmentSpec spec;
    spec.seed = derive_seed(1, item.id);
    spec.box = augment_box("low_light");
    darker += lum_stat(bpw_augment(item.image, spec), false) < lum_stat(item.image, false);
    spec.box = augment_box("fog");
    flatter += lum_stat(bpw_augment(item.image, spec), true) < lum_stat(item.image, true);
  }
  return {n > 0 && darker == n && flatter * 10 >= n * 9,
          "low_light darker " + std::to_string(darker) + "/" + std::to_string(n) + ", fog flatter " +
              std::to_string(flatter) + "/" + std::to_string(n)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism(const Corpus&, const fs::path& corpus_dir) {
  const fs::path base = fs::temp_directory_path() / "unifilt_acceptance_determinism";
  fs::remove_all(base);
  for (const char* run : {"a", "b"}) {
    const int rc = run_cli({"experiment", "--degrade", "pixel_wise", "--optimize", "bpw", "--corpus",
                            corpus_dir.string(), "--seed", "1", "--out-dir", (base / run).string()});
    if (rc != 0) return {false, "experiment exited with " + std::to_string(rc)};
  }
  const std::string a = slurp(base / "a" / "rows.csv");
  const std::string b = slurp(base / "b" / "rows.csv");
  fs::remove_all(base);
  return {!a.empty() && a == b, a == b ? "rows.csv identical (" + std::to_string(a.size()) + " bytes)"
                                       : "rows.csv differs"};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance CORPUS_DIR [criterion...]\n";
    return 2;
  }
  const fs::path corpus_dir = argv[1];
  std::set<int> only;
  for (int i = 2; i < argc; ++i) only.insert(std::stoi(argv[i]));

  Corpus corpus;
  try {
    corpus = load_corpus(corpus_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  struct Criterion {
    int id;
    const char* name;
    double budget_seconds;
    std::function<Outcome(const Corpus&)> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "identity", 1.0, identity_suite},
      {2, "gradient oracle", 30.0, gradient_oracle},
      {3, "adjoint identity", 0.0, adjoint_identity},
      {4, "bpw bezier oracle", 0.0, bezier_oracle},
      {5, "bpw monotonicity", 0.0, monotonicity},
      {6, "self-recovery", 300.0, self_recovery},
      {7, "mimicry trends", 900.0, mimicry_trends},
      {8, "augmentation statistics", 0.0, augmentation_stats},
      {9, "determinism", 0.0, [&](const Corpus& c) { return determinism(c, corpus_dir); }},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run(corpus);
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_seconds > 0.0 && secs >= c.budget_seconds) {
      o.pass = false;
      o.detail += ", over time budget of " + fmt("%.0f s", c.budget_seconds);
    }
    failures += !o.pass;
    std::cout << "criterion " << c.id << " " << c.name << ": " << (o.pass ? "PASS" : "FAIL") << " ("
              << o.detail << "; " << fmt("%.1f s", secs) << ")" << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
