#include "optomech/synth.hpp"

#include <cmath>
#include <stdexcept>

#include "optomech/physics.hpp"
#include "optomech/rng.hpp"

namespace optomech {

double relative_bin_sd(std::uint32_t n_avg) {
  if (n_avg < 1) throw std::invalid_argument("n_avg must be >= 1");
  return 1.0 / std::sqrt(static_cast<double>(n_avg));
}

Spectrum apply_measurement_noise(const Spectrum& model, std::uint64_t seed, Exec exec) {
  model.validate();
  Spectrum out = model;
  out.seed = seed;
  const std::uint32_t n_avg = model.n_avg;
  for_each_index(model.values.size(), exec, [&](std::size_t i) {
    CounterRng rng(seed, static_cast<std::uint64_t>(i));
    out.values[i] = model.values[i] * rng.next_gamma_mean_one(n_avg);
  });
  return out;
}

Spectrum synthesize(const SynthRequest& req, Exec exec) {
  req.system.validate();
  req.config.validate();
  const double gamma = req.system.mech_linewidth_hz;
  const double f_m = req.system.mech_freq_hz;
  if (req.config.freq_start_hz > f_m - 10.0 * gamma ||
      req.config.freq_stop_hz < f_m + 10.0 * gamma) {
    throw std::invalid_argument(
        "synthesis grid must cover at least 10 mechanical linewidths on each side of resonance");
  }
  return apply_measurement_noise(displacement_spectrum(req.system, req.config, exec), req.seed,
                                 exec);
}

}  // namespace optomech
