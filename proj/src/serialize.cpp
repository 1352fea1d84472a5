#include "optomech/serialize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>

#include "optomech/physics.hpp"

namespace optomech {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Non-finite spectral densities (probe-off imprecision) become JSON null.
nlohmann::ordered_json num_or_null(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

}  // namespace

nlohmann::ordered_json fit_to_json(const LorentzianFit& fit) {
  nlohmann::ordered_json j;
  j["floor"] = fit.floor;
  j["height"] = fit.height;
  j["center"] = fit.center;
  j["linewidth"] = fit.linewidth;
  auto cov = nlohmann::ordered_json::array();
  for (const auto& row : fit.covariance) {
    auto r = nlohmann::ordered_json::array();
    for (double v : row) r.push_back(v);
    cov.push_back(r);
  }
  j["covariance"] = cov;
  j["n_iter"] = fit.n_iter;
  j["converged"] = fit.converged;
  j["residual_norm"] = fit.residual_norm;
  return j;
}

nlohmann::ordered_json calibration_to_json(const CalibrationResult& result) {
  nlohmann::ordered_json j;
  j["g0"] = result.g0;
  j["g0_uncertainty"] = result.g0_uncertainty;
  j["implied_transduction"] = result.implied_transduction;
  return j;
}

nlohmann::ordered_json budget_to_json(const NoiseBudget& budget) {
  nlohmann::ordered_json j;
  j["s_zp"] = budget.s_zp;
  j["s_th"] = budget.s_th;
  j["s_ba"] = budget.s_ba;
  j["s_imp"] = num_or_null(budget.s_imp);
  j["s_total"] = num_or_null(budget.s_total);
  j["n_th"] = budget.n_th;
  j["n_ba"] = budget.n_ba;
  return j;
}

nlohmann::ordered_json system_to_json(const OptomechSystem& sys) {
  nlohmann::ordered_json j;
  j["cavity_freq_hz"] = sys.cavity_freq_hz;
  j["cavity_linewidth_hz"] = sys.cavity_linewidth_hz;
  j["mech_freq_hz"] = sys.mech_freq_hz;
  j["mech_linewidth_hz"] = sys.mech_linewidth_hz;
  j["coupling_hz"] = sys.coupling_hz;
  j["mass_kg"] = sys.mass_kg;
  return j;
}

void write_sweep_csv(const SweepResult& sweep, std::ostream& out) {
  out << "power_w,s_imp_model,s_ba_model,s_th_model,s_zp,floor_fit,height_fit,linewidth_fit,"
         "guard_ok,converged\n";
  for (const SweepPoint& pt : sweep.points) {
    out << fmt17(pt.power_w) << ',' << fmt17(pt.budget.s_imp) << ',' << fmt17(pt.budget.s_ba)
        << ',' << fmt17(pt.budget.s_th) << ',' << fmt17(pt.budget.s_zp) << ','
        << fmt17(pt.fit.floor) << ',' << fmt17(pt.fit.height) << ',' << fmt17(pt.fit.linewidth)
        << ',' << (pt.guard_ok ? 1 : 0) << ',' << (pt.fit.converged ? 1 : 0) << "\n";
  }
}

nlohmann::ordered_json sweep_summary_json(const SweepResult& sweep) {
  std::size_t n_converged = 0;
  std::size_t n_guard_ok = 0;
  double max_ba_th = -std::numeric_limits<double>::infinity();
  double min_imp_zp = std::numeric_limits<double>::infinity();
  for (const SweepPoint& pt : sweep.points) {
    if (pt.fit.converged) ++n_converged;
    if (pt.guard_ok) ++n_guard_ok;
    max_ba_th = std::max(max_ba_th, db_ratio(pt.budget.s_ba, pt.budget.s_th));
    min_imp_zp = std::min(min_imp_zp, db_ratio(pt.budget.s_imp, pt.budget.s_zp));
  }
  nlohmann::ordered_json j;
  j["n_points"] = sweep.points.size();
  j["n_converged"] = n_converged;
  j["n_guard_ok"] = n_guard_ok;
  j["crossover_power_w"] = crossover_power(sweep.system, sweep.base_config);
  j["optimum_power_w"] = optimum_power(sweep.system, sweep.base_config.efficiency);
  j["max_backaction_over_thermal_db"] = num_or_null(max_ba_th);
  j["min_imprecision_over_zp_db"] = num_or_null(min_imp_zp);
  return j;
}

}  // namespace optomech
