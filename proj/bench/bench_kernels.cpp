#include <benchmark/benchmark.h>

#include "unifilt/classical.hpp"
#include "unifilt/fit.hpp"
#include "unifilt/grad.hpp"
#include "unifilt/reference.hpp"
#include "unifilt/rng.hpp"
#include "unifilt/unified.hpp"

using namespace unifilt;

namespace {

Image bench_image(int side) {
  Rng rng(42);
  return random_image(side, side, rng);
}

std::array<Kernel, 3> bench_kernels(int side) {
  Rng rng(7);
  std::array<Kernel, 3> k{Kernel(side), Kernel(side), Kernel(side)};
  for (auto& kern : k) {
    for (double& w : kern.weights()) w = rng.uniform(-1.0, 1.0);
  }
  return k;
}

void BM_Convolve9(benchmark::State& state) {
  const Image img = bench_image(static_cast<int>(state.range(0)));
  const auto k = bench_kernels(9);
  for (auto _ : state) benchmark::DoNotOptimize(convolve2d(img, k));
}

void BM_Convolve9Reference(benchmark::State& state) {
  const Image img = bench_image(static_cast<int>(state.range(0)));
  const auto k = bench_kernels(9);
  for (auto _ : state) benchmark::DoNotOptimize(reference::convolve2d(img, k));
}

void BM_DarkChannel(benchmark::State& state) {
  const Image img = bench_image(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(normalized_dark_channel(img, {0.9, 0.9, 0.9}, 15));
  }
}

void BM_DarkChannelReference(benchmark::State& state) {
  const Image img = bench_image(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(reference::normalized_dark_channel(img, {0.9, 0.9, 0.9}, 15));
  }
}

void BM_Kbl(benchmark::State& state) {
  const Image img = bench_image(static_cast<int>(state.range(0)));
  const auto k1 = bench_kernels(9);
  const auto k2 = bench_kernels(9);
  for (auto _ : state) benchmark::DoNotOptimize(raw::kbl(img, k1, k2));
}

void BM_KblReference(benchmark::State& state) {
  const Image img = bench_image(static_cast<int>(state.range(0)));
  const auto k1 = bench_kernels(9);
  const auto k2 = bench_kernels(9);
  for (auto _ : state) benchmark::DoNotOptimize(reference::kbl(img, k1, k2));
}

void BM_KblVjp(benchmark::State& state) {
  const Image img = bench_image(static_cast<int>(state.range(0)));
  const FilterId id = FilterId::of(FilterKind::kbl);
  const auto params = neutral_params(id);
  const Image up = bench_image(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(param_vjp(id, img, params, up));
}

void BM_SsimLoss(benchmark::State& state) {
  const Image a = bench_image(static_cast<int>(state.range(0)));
  Rng rng(3);
  const Image b = random_image(a.height(), a.width(), rng);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_loss(a, b, LossWeights{}));
}

}  // namespace

BENCHMARK(BM_Convolve9)->Arg(64)->Arg(256);
BENCHMARK(BM_Convolve9Reference)->Arg(64)->Arg(256);
BENCHMARK(BM_DarkChannel)->Arg(64)->Arg(256);
BENCHMARK(BM_DarkChannelReference)->Arg(64)->Arg(256);
BENCHMARK(BM_Kbl)->Arg(64)->Arg(256);
BENCHMARK(BM_KblReference)->Arg(64)->Arg(256);
BENCHMARK(BM_KblVjp)->Arg(64)->Arg(256);
BENCHMARK(BM_SsimLoss)->Arg(64)->Arg(256);

BENCHMARK_MAIN();
