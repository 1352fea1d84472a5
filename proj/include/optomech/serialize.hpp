#pragma once

#include <iosfwd>

#include <json.hpp>

#include "optomech/budget.hpp"
#include "optomech/calibrate.hpp"
#include "optomech/fit.hpp"
#include "optomech/types.hpp"

namespace optomech {

// JSON reports use ordered_json so key order is fixed and output is
// byte-stable across runs. Non-finite spectral densities serialize as null.

nlohmann::ordered_json fit_to_json(const LorentzianFit& fit);
nlohmann::ordered_json calibration_to_json(const CalibrationResult& result);
nlohmann::ordered_json budget_to_json(const NoiseBudget& budget);
nlohmann::ordered_json system_to_json(const OptomechSystem& sys);

// Sweep CSV columns:
// power_w,s_imp_model,s_ba_model,s_th_model,s_zp,floor_fit,height_fit,
// linewidth_fit,guard_ok,converged   (booleans as 1/0)
void write_sweep_csv(const SweepResult& sweep, std::ostream& out);

nlohmann::ordered_json sweep_summary_json(const SweepResult& sweep);

}  // namespace optomech
