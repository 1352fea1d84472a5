#pragma once

#include <array>
#include <optional>
#include <span>

#include "optomech/exec.hpp"
#include "optomech/spectrum.hpp"
#include "optomech/types.hpp"

namespace optomech {

/// Result of fitting S(f) = floor + height / (1 + 4 (f - center)^2 / linewidth^2).
/// linewidth is the FWHM in Hz. Covariance rows/columns follow the parameter
/// order {floor, height, center, linewidth}, in linear (reported) space.
struct LorentzianFit {
  double floor = 0;
  double height = 0;
  double center = 0;
  double linewidth = 0;
  std::array<std::array<double, 4>, 4> covariance{};
  int n_iter = 0;
  bool converged = false;
  double residual_norm = 0;  // rms residual divided by the fitted height
};

struct FitOptions {
  /// Per-bin relative noise sd (1/sqrt(n_avg)). Positive: the covariance uses
  /// the sandwich estimator with Sigma = diag((rel_bin_sd * model)^2). Zero:
  /// noise scale unknown, covariance falls back to residual-scaled (JtJ)^-1.
  double rel_bin_sd = 0.0;
  int max_iter = 200;
  double step_tol = 1e-10;  // relative parameter step
  double cost_tol = 1e-12;  // relative cost decrease
};

/// Damped Gauss-Newton least squares with the analytic Jacobian. The
/// objective is the plain unweighted sum of squared residuals. Height and
/// linewidth are optimized in log space internally (positivity without
/// constraints) and reported in linear space. Values are pre-scaled by their
/// maximum so the normal equations stay well conditioned for PSDs of any
/// magnitude. Needs at least 50 bins on a strictly increasing grid.
LorentzianFit fit_lorentzian(std::span<const double> freqs_hz, std::span<const double> values,
                             const FitOptions& options = {},
                             const std::optional<LorentzianFit>& init = {},
                             Exec exec = Exec::parallel);

/// Spectrum overload; rel_bin_sd is taken from the spectrum's n_avg.
LorentzianFit fit_lorentzian(const Spectrum& spec, const std::optional<LorentzianFit>& init = {},
                             Exec exec = Exec::parallel);

/// Data-driven starting point: floor = median, center = argmax (lowest
/// frequency wins ties), height = max - floor, linewidth = interpolated full
/// width above half height, falling back to grid span / 100 when no crossing
/// exists on either side.
LorentzianFit initial_guess(std::span<const double> freqs_hz, std::span<const double> values);
LorentzianFit initial_guess(const Spectrum& spec);

/// True when the fitted linewidth agrees with the device's mechanical
/// linewidth to 5% relative. Refuses (throws std::invalid_argument) on an
/// unconverged fit.
bool linewidth_guard(const LorentzianFit& fit, const OptomechSystem& sys);

}  // namespace optomech
