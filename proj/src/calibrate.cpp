#include "optomech/calibrate.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "optomech/constants.hpp"
#include "optomech/errors.hpp"
#include "optomech/physics.hpp"

namespace optomech {

OptomechSystem SystemWithoutCoupling::with_coupling(double coupling_hz) const {
  OptomechSystem sys{cavity_freq_hz, cavity_linewidth_hz, mech_freq_hz, mech_linewidth_hz,
                     coupling_hz, mass_kg};
  sys.validate();
  return sys;
}

void SystemWithoutCoupling::validate() const {
  // Any positive coupling produces the same checks on the other five fields.
  with_coupling(1.0);
}

SystemWithoutCoupling without_coupling(const OptomechSystem& sys) {
  sys.validate();
  return {sys.cavity_freq_hz, sys.cavity_linewidth_hz, sys.mech_freq_hz, sys.mech_linewidth_hz,
          sys.mass_kg};
}

CalibrationResult calibration_from_fit(const LorentzianFit& fit, const SystemWithoutCoupling& sys,
                                       double temperature_k) {
  sys.validate();
  if (!fit.converged) {
    throw AnalysisError("calibration refused: lorentzian fit did not converge");
  }
  if (!(fit.height > 0) || !(fit.linewidth > 0)) {
    throw AnalysisError("calibration refused: fitted line has no positive area");
  }

  // Integrated phase noise of the full Lorentzian, rad^2.
  const double area = 0.5 * std::numbers::pi * fit.height * fit.linewidth;
  const double n_th = thermal_occupancy(sys.mech_freq_hz, temperature_k);
  const double kappa = constants::two_pi * sys.cavity_linewidth_hz;
  const double omega_m = constants::two_pi * sys.mech_freq_hz;
  const double g0_sq = (kappa * kappa + 4.0 * omega_m * omega_m) * area /
                       (64.0 * (2.0 * n_th + 1.0));
  if (!std::isfinite(g0_sq) || !(g0_sq > 0)) {
    throw AnalysisError("calibration refused: implied coupling is not positive");
  }

  CalibrationResult result;
  result.g0 = std::sqrt(g0_sq) / constants::two_pi;

  // Propagate the fit covariance through area = (pi/2) h w, then through the
  // square root: sigma_g0 = g0 * sigma_area / (2 area).
  const double da_dh = 0.5 * std::numbers::pi * fit.linewidth;
  const double da_dw = 0.5 * std::numbers::pi * fit.height;
  double var_area = da_dh * da_dh * fit.covariance[1][1] +
                    da_dw * da_dw * fit.covariance[3][3] +
                    2.0 * da_dh * da_dw * fit.covariance[1][3];
  var_area = std::max(var_area, 0.0);
  result.g0_uncertainty = result.g0 * std::sqrt(var_area) / (2.0 * area);

  const double x_zp_sq = constants::hbar / (2.0 * sys.mass_kg * omega_m);
  result.implied_transduction =
      x_zp_sq * (kappa * kappa + 4.0 * omega_m * omega_m) / (64.0 * g0_sq);
  return result;
}

CalibrationResult calibrate_coupling(const Spectrum& phase_spec, const SystemWithoutCoupling& sys,
                                     double temperature_k, Exec exec) {
  phase_spec.validate();
  if (phase_spec.unit != SpectrumUnit::phase) {
    throw std::invalid_argument(
        "unit mismatch: calibration requires a phase spectrum (rad^2/Hz)");
  }
  const LorentzianFit fit = fit_lorentzian(phase_spec, {}, exec);
  return calibration_from_fit(fit, sys, temperature_k);
}

}  // namespace optomech
