#pragma once

#include <cstdint>

namespace optomech {

/// Counter-based random stream keyed by (seed, stream index).
///
/// Each (seed, stream) pair selects an independent deterministic sequence, so
/// per-bin draws can be made in any order or in parallel and still reproduce
/// bit-identically. The construction is a SplitMix64-style finalizer applied
/// to base + counter * golden_gamma, where base is derived from the key.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();

  /// Uniform in [0, 1), 53-bit resolution.
  double next_unit();

  /// Uniform in (0, 1]; safe as a log() argument.
  double next_unit_open();

  /// Standard normal via Box-Muller (one value per two uniforms).
  double next_normal();

  /// Gamma(shape, 1/shape): mean 1, relative sd 1/sqrt(shape). Marsaglia-Tsang
  /// rejection sampling; requires shape >= 1.
  double next_gamma_mean_one(std::uint32_t shape);

 private:
  std::uint64_t base_ = 0;
  std::uint64_t counter_ = 0;
};

}  // namespace optomech
