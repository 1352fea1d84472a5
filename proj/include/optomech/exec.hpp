#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <vector>

namespace optomech {

/// Execution policy for the data-parallel kernels. `serial` is the reference
/// path; `parallel` runs the same blocked arithmetic under OpenMP. Both paths
/// produce bit-identical results for any thread count.
enum class Exec { serial, parallel };

namespace detail {
/// Reduction block size. Partial sums are formed per block and combined in
/// block order, which pins the floating-point summation order regardless of
/// how blocks are scheduled across threads.
inline constexpr std::size_t kReductionBlock = 4096;
}  // namespace detail

/// Apply f(i) for every i in [0, n). Iterations must be independent.
template <typename Fn>
void for_each_index(std::size_t n, Exec exec, Fn&& f) {
  if (exec == Exec::parallel) {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
      f(static_cast<std::size_t>(i));
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) f(i);
  }
}

/// Deterministic blocked reduction of K accumulators over [0, n).
/// f(lo, hi, acc) adds the contribution of bins [lo, hi) into acc[0..K).
template <std::size_t K, typename BlockFn>
std::array<double, K> blocked_sum(std::size_t n, Exec exec, BlockFn&& f) {
  const std::size_t nblocks = n == 0 ? 0 : (n - 1) / detail::kReductionBlock + 1;
  std::vector<std::array<double, K>> partials(nblocks);
  for_each_index(nblocks, exec, [&](std::size_t b) {
    partials[b].fill(0.0);
    const std::size_t lo = b * detail::kReductionBlock;
    const std::size_t hi = std::min(n, lo + detail::kReductionBlock);
    f(lo, hi, partials[b].data());
  });
  std::array<double, K> total{};
  for (const auto& p : partials) {
    for (std::size_t j = 0; j < K; ++j) total[j] += p[j];
  }
  return total;
}

}  // namespace optomech
