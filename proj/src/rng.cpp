#include "optomech/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace optomech {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;
constexpr std::uint64_t kStreamSalt = 0xD1B54A32D192ED03ull;

// SplitMix64 finalizer: bijective avalanche mix of a 64-bit word.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : base_(mix64(mix64(seed + kGolden) ^ (stream * kStreamSalt + kGolden))) {}

std::uint64_t CounterRng::next_u64() {
  counter_ += 1;
  return mix64(base_ + counter_ * kGolden);
}

double CounterRng::next_unit() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double CounterRng::next_unit_open() { return 1.0 - next_unit(); }

double CounterRng::next_normal() {
  const double u1 = next_unit_open();
  const double u2 = next_unit();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double CounterRng::next_gamma_mean_one(std::uint32_t shape) {
  if (shape < 1) throw std::invalid_argument("gamma shape must be >= 1");
  const double a = static_cast<double>(shape);
  const double d = a - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x = 0;
    double v = 0;
    do {
      x = next_normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = next_unit_open();
    const double x2 = x * x;
    // Squeeze test first, full log test as fallback (Marsaglia-Tsang).
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v / a;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v / a;
  }
}

}  // namespace optomech
