#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "optomech/exec.hpp"
#include "optomech/fit.hpp"
#include "optomech/types.hpp"

namespace optomech {

/// Closed-form noise decomposition at the mechanical resonance for one
/// operating point. At power_w = 0 the imprecision floor is reported as +inf.
NoiseBudget noise_budget(const OptomechSystem& sys, const MeasurementConfig& config);

/// Power at which backaction overtakes the thermal force noise:
///   P_cross = 4 n_th P_SQL.
double crossover_power(const OptomechSystem& sys, const MeasurementConfig& config);

/// 10 log10(a/b). Both arguments must be positive and finite.
double db_ratio(double a, double b);

/// One power point of a sweep: the model budget next to what a blind fit of
/// the synthesized spectrum recovers. apparent_motion is the fitted floor,
/// actual_motion the fitted peak height above it.
struct SweepPoint {
  double power_w = 0;
  NoiseBudget budget;
  LorentzianFit fit;
  double apparent_motion = 0;
  double actual_motion = 0;
  bool guard_ok = false;
};

struct SweepResult {
  OptomechSystem system;
  MeasurementConfig base_config;
  std::vector<SweepPoint> points;
};

/// Synthesize, fit and decompose each power in order. Point i uses seed ^ i,
/// so individual points reproduce independently of which powers accompany
/// them. Failed fits are recorded with converged = false, never dropped.
/// Powers must be non-empty and strictly positive.
SweepResult run_sweep(const OptomechSystem& sys, const MeasurementConfig& base,
                      std::span<const double> powers_w, std::uint64_t seed,
                      Exec exec = Exec::parallel);

}  // namespace optomech
