#pragma once

#include "optomech/exec.hpp"
#include "optomech/spectrum.hpp"
#include "optomech/types.hpp"

namespace optomech {

/// Zero-point motion x_zp = sqrt(hbar / (2 m Omega_m)), in meters.
double zero_point_motion(const OptomechSystem& sys);

/// Bose-Einstein phonon occupancy of the mechanical mode at the given bath
/// temperature: n_th = 1 / (exp(hbar Omega_m / kB T) - 1).
double thermal_occupancy(const OptomechSystem& sys, double temperature_k);

/// Same occupancy for a bare mechanical frequency, without a full device.
double thermal_occupancy(double mech_freq_hz, double temperature_k);

/// Standard-quantum-limit power
///   P_SQL = hbar omega_c Gamma_m (kappa^2 + 4 Omega_m^2) / (64 g0^2),
/// the incident power at which (for unit efficiency) imprecision equals
/// backaction. All rates angular internally; input fields are ordinary Hz.
double sql_power(const OptomechSystem& sys);

/// Peak one-sided displacement PSD of zero-point motion on resonance:
///   s_zp = 2 hbar / (m Omega_m Gamma_m) = 4 x_zp^2 / Gamma_m,  m^2/Hz.
double zero_point_psd(const OptomechSystem& sys);

/// The two power-dependent added-noise terms, evaluated on resonance.
struct AddedNoise {
  double s_imp = 0;  // imprecision floor, (s_zp/2)(P_SQL/P)/eta
  double s_ba = 0;   // backaction peak, (s_zp/2)(P/P_SQL)
};

/// Requires power > 0 and efficiency in (0, 1]. The efficiency penalty
/// divides the imprecision term only; backaction is set by the intracavity
/// field and does not care how well the output is detected.
AddedNoise added_noise(const OptomechSystem& sys, double power_w, double efficiency);

/// Power minimizing s_imp + s_ba: P_opt = P_SQL / sqrt(eta).
double optimum_power(const OptomechSystem& sys, double efficiency);

/// Backaction-added phonon occupancy n_ba = P / (4 P_SQL). Requires power >= 0.
double backaction_occupancy(const OptomechSystem& sys, double power_w);

/// Model displacement spectrum over the configured grid:
///   S_x(f) = s_imp + (s_zp + s_th + s_ba) / (1 + 4 (f - f_m)^2 / Gamma_m^2).
/// The grid must contain the mechanical resonance. power_w = 0 takes the
/// probe-off limit (s_imp = 0, n_ba = 0) so the bare thermal line is
/// representable; the noise budget instead reports s_imp = +inf there.
Spectrum displacement_spectrum(const OptomechSystem& sys, const MeasurementConfig& config,
                               Exec exec = Exec::parallel);

/// Transduction factor between phase PSD of the probe (rad^2/Hz) and
/// displacement PSD (m^2/Hz) for resonant probing of an overcoupled cavity:
///   S_x / S_phi = x_zp^2 (kappa^2 + 4 Omega_m^2) / (64 g0^2).
double phase_to_displacement_factor(const OptomechSystem& sys);

/// Unit conversions along that factor. The input spectrum must carry the
/// matching unit tag; metadata (n_avg, seed) is preserved.
Spectrum phase_to_displacement(const OptomechSystem& sys, const Spectrum& spec);
Spectrum displacement_to_phase(const OptomechSystem& sys, const Spectrum& spec);

/// Smallest resolvable force spectral density, N/sqrt(Hz): the total
/// displacement noise at resonance referred back through the mechanical
/// susceptibility, sqrt(S_x_total(f_m)) * m Omega_m Gamma_m.
double force_sensitivity(const OptomechSystem& sys, const MeasurementConfig& config);

/// Group delay of the cavity response at a probe offset f from resonance:
///   tau(f) = (4 / kappa) / (1 + (2 * 2pi (f - f_c) / kappa)^2).
/// Peaks at 4/kappa on resonance; the delay profile has FWHM kappa / 2pi.
double group_delay(const OptomechSystem& sys, double probe_freq_hz);

}  // namespace optomech
