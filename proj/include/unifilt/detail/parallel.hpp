#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

namespace unifilt::detail {

inline constexpr std::size_t kReductionBlocks = 64;

/// Sums `width` accumulators over i in [0, n). `body(i, acc)` adds the
/// contribution of item i into acc[0..width). Items are split into a fixed
/// number of contiguous blocks reduced in order, so the result does not
/// depend on the thread count.
template <typename Body>
std::vector<double> blocked_sum(std::size_t n, std::size_t width, Body&& body) {
  const std::size_t blocks = std::max<std::size_t>(1, std::min(kReductionBlocks, n));
  std::vector<double> partial(blocks * width, 0.0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(blocks); ++b) {
    const std::size_t begin = n * static_cast<std::size_t>(b) / blocks;
    const std::size_t end = n * (static_cast<std::size_t>(b) + 1) / blocks;
    double* acc = partial.data() + static_cast<std::size_t>(b) * width;
    for (std::size_t i = begin; i < end; ++i) body(i, acc);
  }
  std::vector<double> total(width, 0.0);
  for (std::size_t b = 0; b < blocks; ++b) {
    for (std::size_t k = 0; k < width; ++k) total[k] += partial[b * width + k];
  }
  return total;
}

}  // namespace unifilt::detail
