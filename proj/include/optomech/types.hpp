#pragma once

#include <cstddef>
#include <cstdint>

namespace optomech {

/// A cavity-optomechanical device. All frequencies are ordinary frequencies in
/// Hz (the formulas convert to angular internally), mass in kg.
struct OptomechSystem {
  double cavity_freq_hz = 0;      // optical/microwave cavity resonance
  double cavity_linewidth_hz = 0; // total cavity linewidth (FWHM)
  double mech_freq_hz = 0;        // mechanical resonance
  double mech_linewidth_hz = 0;   // mechanical linewidth (FWHM)
  double coupling_hz = 0;         // vacuum optomechanical coupling rate g0
  double mass_kg = 0;             // effective motional mass

  /// Throws std::invalid_argument unless every field is positive and finite
  /// and the mechanical line is resolved (linewidth < resonance frequency).
  void validate() const;
};

/// Settings for one simulated measurement: probe power, detection efficiency,
/// bath temperature, averaging depth and the analysis frequency grid.
struct MeasurementConfig {
  double power_w = 0;          // incident probe power; 0 means probe off
  double efficiency = 1.0;     // homodyne detection efficiency, in (0, 1]
  double temperature_k = 0;    // bath temperature
  std::uint32_t n_avg = 1;     // periodograms averaged per bin
  double freq_start_hz = 0;    // grid start (inclusive)
  double freq_stop_hz = 0;     // grid stop (inclusive)
  std::size_t n_bins = 0;      // grid points, evenly spaced

  /// Throws std::invalid_argument on out-of-range settings.
  void validate() const;
};

/// One-sided displacement noise decomposition at the mechanical resonance.
/// All spectral densities in m^2/Hz; occupancies are dimensionless.
struct NoiseBudget {
  double s_zp = 0;    // zero-point contribution (peak spectral density)
  double s_th = 0;    // thermal contribution, 2 * n_th * s_zp
  double s_ba = 0;    // backaction contribution, 2 * n_ba * s_zp
  double s_imp = 0;   // imprecision floor; +inf when the probe is off
  double s_total = 0; // on-resonance total
  double n_th = 0;    // thermal phonon occupancy
  double n_ba = 0;    // backaction-added occupancy
};

}  // namespace optomech
