#include "optomech/budget.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "optomech/physics.hpp"
#include "optomech/synth.hpp"

namespace optomech {

NoiseBudget noise_budget(const OptomechSystem& sys, const MeasurementConfig& config) {
  sys.validate();
  config.validate();
  NoiseBudget b;
  b.s_zp = zero_point_psd(sys);
  b.n_th = thermal_occupancy(sys, config.temperature_k);
  b.n_ba = backaction_occupancy(sys, config.power_w);
  b.s_th = 2.0 * b.n_th * b.s_zp;
  b.s_ba = 2.0 * b.n_ba * b.s_zp;
  b.s_imp = config.power_w > 0 ? added_noise(sys, config.power_w, config.efficiency).s_imp
                               : std::numeric_limits<double>::infinity();
  b.s_total = (b.s_zp + b.s_th + b.s_ba) + b.s_imp;
  return b;
}

double crossover_power(const OptomechSystem& sys, const MeasurementConfig& config) {
  sys.validate();
  config.validate();
  return 4.0 * thermal_occupancy(sys, config.temperature_k) * sql_power(sys);
}

double db_ratio(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b) || !(a > 0) || !(b > 0)) {
    throw std::invalid_argument("db_ratio requires positive finite arguments");
  }
  return 10.0 * std::log10(a / b);
}

SweepResult run_sweep(const OptomechSystem& sys, const MeasurementConfig& base,
                      std::span<const double> powers_w, std::uint64_t seed, Exec exec) {
  sys.validate();
  base.validate();
  if (powers_w.empty()) throw std::invalid_argument("sweep needs at least one power");
  for (double p : powers_w) {
    if (!std::isfinite(p) || !(p > 0)) {
      throw std::invalid_argument("sweep powers must be positive and finite");
    }
  }

  SweepResult result;
  result.system = sys;
  result.base_config = base;
  result.points.resize(powers_w.size());
  // Points are independent measurements; each one re-keys the seed by its
  // index so a point's spectrum does not depend on which powers surround it.
  for_each_index(powers_w.size(), exec, [&](std::size_t i) {
    MeasurementConfig cfg = base;
    cfg.power_w = powers_w[i];
    const SynthRequest req{sys, cfg, seed ^ static_cast<std::uint64_t>(i)};
    const Spectrum spec = synthesize(req, exec);
    SweepPoint& pt = result.points[i];
    pt.power_w = powers_w[i];
    pt.budget = noise_budget(sys, cfg);
    pt.fit = fit_lorentzian(spec, {}, exec);
    pt.apparent_motion = pt.fit.floor;
    pt.actual_motion = pt.fit.height;
    pt.guard_ok = pt.fit.converged ? linewidth_guard(pt.fit, sys) : false;
  });
  return result;
}

}  // namespace optomech
