#include "optomech/physics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "optomech/constants.hpp"

namespace optomech {

namespace {

inline double angular(double f_hz) { return constants::two_pi * f_hz; }

}  // namespace

double zero_point_motion(const OptomechSystem& sys) {
  sys.validate();
  return std::sqrt(constants::hbar / (2.0 * sys.mass_kg * angular(sys.mech_freq_hz)));
}

double thermal_occupancy(double mech_freq_hz, double temperature_k) {
  if (!std::isfinite(mech_freq_hz) || !(mech_freq_hz > 0)) {
    throw std::invalid_argument("mech_freq_hz must be positive and finite");
  }
  if (!std::isfinite(temperature_k) || !(temperature_k > 0)) {
    throw std::invalid_argument("temperature_k must be positive and finite");
  }
  const double x = constants::hbar * angular(mech_freq_hz) / (constants::k_b * temperature_k);
  // expm1 keeps the high-temperature regime (x -> 0) accurate; for very cold
  // baths expm1 overflows to +inf and the occupancy correctly underflows to 0.
  return 1.0 / std::expm1(x);
}

double thermal_occupancy(const OptomechSystem& sys, double temperature_k) {
  sys.validate();
  return thermal_occupancy(sys.mech_freq_hz, temperature_k);
}

double sql_power(const OptomechSystem& sys) {
  sys.validate();
  const double omega_c = angular(sys.cavity_freq_hz);
  const double kappa = angular(sys.cavity_linewidth_hz);
  const double omega_m = angular(sys.mech_freq_hz);
  const double gamma_m = angular(sys.mech_linewidth_hz);
  const double g0 = angular(sys.coupling_hz);
  return constants::hbar * omega_c * gamma_m * (kappa * kappa + 4.0 * omega_m * omega_m) /
         (64.0 * g0 * g0);
}

double zero_point_psd(const OptomechSystem& sys) {
  sys.validate();
  return 2.0 * constants::hbar /
         (sys.mass_kg * angular(sys.mech_freq_hz) * angular(sys.mech_linewidth_hz));
}

AddedNoise added_noise(const OptomechSystem& sys, double power_w, double efficiency) {
  sys.validate();
  if (!std::isfinite(power_w) || !(power_w > 0)) {
    throw std::invalid_argument("added_noise requires power_w > 0");
  }
  if (!std::isfinite(efficiency) || !(efficiency > 0) || efficiency > 1.0) {
    throw std::invalid_argument("efficiency must lie in (0, 1]");
  }
  const double half_zp = 0.5 * zero_point_psd(sys);
  const double p_sql = sql_power(sys);
  AddedNoise out;
  out.s_imp = half_zp * (p_sql / power_w) / efficiency;
  out.s_ba = half_zp * (power_w / p_sql);
  return out;
}

double optimum_power(const OptomechSystem& sys, double efficiency) {
  if (!std::isfinite(efficiency) || !(efficiency > 0) || efficiency > 1.0) {
    throw std::invalid_argument("efficiency must lie in (0, 1]");
  }
  return sql_power(sys) / std::sqrt(efficiency);
}

double backaction_occupancy(const OptomechSystem& sys, double power_w) {
  if (!std::isfinite(power_w) || power_w < 0) {
    throw std::invalid_argument("power_w must be non-negative and finite");
  }
  return power_w / (4.0 * sql_power(sys));
}

Spectrum displacement_spectrum(const OptomechSystem& sys, const MeasurementConfig& config,
                               Exec exec) {
  sys.validate();
  config.validate();
  if (!(config.freq_start_hz < sys.mech_freq_hz && sys.mech_freq_hz < config.freq_stop_hz)) {
    throw std::invalid_argument("frequency grid must contain the mechanical resonance");
  }

  const double s_zp = zero_point_psd(sys);
  const double n_th = thermal_occupancy(sys, config.temperature_k);
  const double n_ba = config.power_w > 0 ? backaction_occupancy(sys, config.power_w) : 0.0;
  const double s_th = 2.0 * n_th * s_zp;
  const double s_ba = 2.0 * n_ba * s_zp;
  const double s_imp =
      config.power_w > 0 ? added_noise(sys, config.power_w, config.efficiency).s_imp : 0.0;
  // Same terms and grouping as noise_budget, so the on-resonance value equals
  // the budget's s_total bit for bit when the probe is on.
  const double line_height = s_zp + s_th + s_ba;

  const double f_m = sys.mech_freq_hz;
  const double gamma = sys.mech_linewidth_hz;
  const double start = config.freq_start_hz;
  const double span = config.freq_stop_hz - config.freq_start_hz;
  const std::size_t n = config.n_bins;

  Spectrum spec;
  spec.freqs_hz.resize(n);
  spec.values.resize(n);
  spec.unit = SpectrumUnit::displacement;
  spec.n_avg = config.n_avg;
  for_each_index(n, exec, [&](std::size_t i) {
    const double f = start + span * (static_cast<double>(i) / static_cast<double>(n - 1));
    const double q = 2.0 * (f - f_m) / gamma;
    spec.freqs_hz[i] = f;
    spec.values[i] = s_imp + line_height / (1.0 + q * q);
  });
  spec.validate();
  return spec;
}

double phase_to_displacement_factor(const OptomechSystem& sys) {
  sys.validate();
  const double kappa = angular(sys.cavity_linewidth_hz);
  const double omega_m = angular(sys.mech_freq_hz);
  const double g0 = angular(sys.coupling_hz);
  const double x_zp = zero_point_motion(sys);
  return x_zp * x_zp * (kappa * kappa + 4.0 * omega_m * omega_m) / (64.0 * g0 * g0);
}

namespace {

Spectrum convert_units(const OptomechSystem& sys, const Spectrum& spec, SpectrumUnit expected,
                       bool multiply) {
  spec.validate();
  if (spec.unit != expected) {
    throw std::invalid_argument(std::string("unit mismatch: expected a ") + to_string(expected) +
                                " spectrum");
  }
  const double factor = phase_to_displacement_factor(sys);
  Spectrum out = spec;
  out.unit = expected == SpectrumUnit::phase ? SpectrumUnit::displacement : SpectrumUnit::phase;
  for (double& v : out.values) v = multiply ? v * factor : v / factor;
  return out;
}

}  // namespace

Spectrum phase_to_displacement(const OptomechSystem& sys, const Spectrum& spec) {
  return convert_units(sys, spec, SpectrumUnit::phase, true);
}

Spectrum displacement_to_phase(const OptomechSystem& sys, const Spectrum& spec) {
  return convert_units(sys, spec, SpectrumUnit::displacement, false);
}

double force_sensitivity(const OptomechSystem& sys, const MeasurementConfig& config) {
  sys.validate();
  config.validate();
  const double s_zp = zero_point_psd(sys);
  const double n_th = thermal_occupancy(sys, config.temperature_k);
  const double n_ba = backaction_occupancy(sys, config.power_w);
  const double s_th = 2.0 * n_th * s_zp;
  const double s_ba = 2.0 * n_ba * s_zp;
  const double s_imp = config.power_w > 0
                           ? added_noise(sys, config.power_w, config.efficiency).s_imp
                           : std::numeric_limits<double>::infinity();
  const double s_total = (s_zp + s_th + s_ba) + s_imp;
  const double chi_inv = sys.mass_kg * angular(sys.mech_freq_hz) * angular(sys.mech_linewidth_hz);
  return std::sqrt(s_total) * chi_inv;
}

double group_delay(const OptomechSystem& sys, double probe_freq_hz) {
  sys.validate();
  if (!std::isfinite(probe_freq_hz)) throw std::invalid_argument("probe_freq_hz must be finite");
  const double kappa = angular(sys.cavity_linewidth_hz);
  const double q = 2.0 * angular(probe_freq_hz - sys.cavity_freq_hz) / kappa;
  return (4.0 / kappa) / (1.0 + q * q);
}

}  // namespace optomech
