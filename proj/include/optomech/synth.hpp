#pragma once

#include <cstdint>

#include "optomech/exec.hpp"
#include "optomech/spectrum.hpp"
#include "optomech/types.hpp"

namespace optomech {

/// One synthetic measurement: device, measurement settings, master seed.
struct SynthRequest {
  OptomechSystem system;
  MeasurementConfig config;
  std::uint64_t seed = 0;
};

/// Relative standard deviation of one averaged bin, 1/sqrt(n_avg).
double relative_bin_sd(std::uint32_t n_avg);

/// Multiply every model bin by an independent Gamma(n_avg, 1/n_avg) draw,
/// mimicking an average of n_avg periodograms: each bin keeps the model as
/// its mean and gets relative sd 1/sqrt(n_avg). Bin k draws from the stream
/// keyed (seed, k), so the result is independent of evaluation order and
/// thread count. Noise is multiplicative: scaling the model scales every
/// synthesized bin by the same factor for a fixed seed.
Spectrum apply_measurement_noise(const Spectrum& model, std::uint64_t seed,
                                 Exec exec = Exec::parallel);

/// displacement_spectrum + apply_measurement_noise. The grid must cover at
/// least +/-10 mechanical linewidths around the resonance so the line shape
/// is actually contained in the record.
Spectrum synthesize(const SynthRequest& req, Exec exec = Exec::parallel);

}  // namespace optomech
