#pragma once

#include "optomech/exec.hpp"
#include "optomech/fit.hpp"
#include "optomech/spectrum.hpp"
#include "optomech/types.hpp"

namespace optomech {

/// Device parameters known before calibration; the vacuum coupling rate is
/// the unknown being extracted.
struct SystemWithoutCoupling {
  double cavity_freq_hz = 0;
  double cavity_linewidth_hz = 0;
  double mech_freq_hz = 0;
  double mech_linewidth_hz = 0;
  double mass_kg = 0;

  OptomechSystem with_coupling(double coupling_hz) const;
  void validate() const;
};

SystemWithoutCoupling without_coupling(const OptomechSystem& sys);

struct CalibrationResult {
  double g0 = 0;                   // vacuum coupling rate, Hz
  double g0_uncertainty = 0;       // 1-sigma, propagated from the fit, Hz
  double implied_transduction = 0; // (m^2/Hz) per (rad^2/Hz) at this g0
};

/// Noise thermometry from a fitted phase-noise line. The fitted Lorentzian
/// area (pi/2 * height * linewidth, rad^2) equals the thermomechanical phase
/// variance, which for a bath at the given temperature pins
///   g0^2 = (kappa^2 + 4 Omega_m^2) * area / (64 (2 n_th + 1)).
/// The zero-point scale cancels, so no independent displacement calibration
/// is needed. Refuses (AnalysisError) unconverged fits and non-positive
/// implied couplings.
CalibrationResult calibration_from_fit(const LorentzianFit& fit, const SystemWithoutCoupling& sys,
                                       double temperature_k);

/// Fit the spectrum, then extract g0 as above. The spectrum must carry phase
/// units; displacement input is a unit mismatch (std::invalid_argument).
CalibrationResult calibrate_coupling(const Spectrum& phase_spec, const SystemWithoutCoupling& sys,
                                     double temperature_k, Exec exec = Exec::parallel);

}  // namespace optomech
