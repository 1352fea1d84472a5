#include "optomech/commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "optomech/physics.hpp"
#include "optomech/serialize.hpp"
#include "optomech/spectrum_io.hpp"
#include "optomech/synth.hpp"

namespace optomech {

namespace {

namespace fs = std::filesystem;

void require_powers(const RunConfig& cfg) {
  if (cfg.powers_w.empty()) {
    throw std::invalid_argument("config provides no probe power (power_w or powers_w)");
  }
}

fs::path prepare_out_dir(const RunConfig& cfg) {
  const fs::path dir = cfg.out_dir.empty() ? fs::path(".") : fs::path(cfg.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw std::runtime_error("cannot create output directory '" + dir.string() + "'");
  }
  return dir;
}

std::string spectrum_file_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "spectrum_%03zu.csv", index);
  return buf;
}

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << text;
  out.flush();
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

}  // namespace

int cmd_budget(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const OptomechSystem sys = cfg.system();
  require_powers(cfg);
  const double any_power = cfg.powers_w.front();

  nlohmann::ordered_json report;
  report["system"] = system_to_json(sys);
  report["x_zp"] = zero_point_motion(sys);
  report["s_zp"] = zero_point_psd(sys);
  report["p_sql"] = sql_power(sys);
  report["n_th"] = thermal_occupancy(sys, cfg.temperature_k);
  report["optimum_power"] = optimum_power(sys, cfg.efficiency);
  report["crossover_power"] = crossover_power(sys, cfg.measurement(any_power));
  report["force_sensitivity_at_optimum"] =
      force_sensitivity(sys, cfg.measurement(optimum_power(sys, cfg.efficiency)));

  auto budgets = nlohmann::ordered_json::array();
  for (double p : cfg.powers_w) {
    const NoiseBudget b = noise_budget(sys, cfg.measurement(p));
    nlohmann::ordered_json row;
    row["power_w"] = p;
    nlohmann::ordered_json fields = budget_to_json(b);
    for (auto& [key, value] : fields.items()) row[key] = value;
    row["backaction_over_thermal_db"] = b.s_ba > 0 ? nlohmann::ordered_json(db_ratio(b.s_ba, b.s_th))
                                                   : nlohmann::ordered_json(nullptr);
    row["imprecision_over_zp_db"] = std::isfinite(b.s_imp) && b.s_imp > 0
                                        ? nlohmann::ordered_json(db_ratio(b.s_imp, b.s_zp))
                                        : nlohmann::ordered_json(nullptr);
    budgets.push_back(row);
  }
  report["budgets"] = budgets;
  out << report.dump(2) << "\n";
  return 0;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  const OptomechSystem sys = cfg.system();
  require_powers(cfg);
  const fs::path dir = prepare_out_dir(cfg);

  for (std::size_t i = 0; i < cfg.powers_w.size(); ++i) {
    const SynthRequest req{sys, cfg.measurement(cfg.powers_w[i]),
                           cfg.seed ^ static_cast<std::uint64_t>(i)};
    Spectrum spec = synthesize(req);
    if (cfg.synth_unit == SpectrumUnit::phase) spec = displacement_to_phase(sys, spec);
    const fs::path path = dir / spectrum_file_name(i);
    write_spectrum_csv(spec, path);
    out << path.string() << "\n";
  }
  return 0;
}

int cmd_fit(const std::filesystem::path& spectrum_csv, std::ostream& out, std::ostream& err) {
  const Spectrum spec = read_spectrum_csv(spectrum_csv);
  const LorentzianFit fit = fit_lorentzian(spec);
  out << fit_to_json(fit).dump(2) << "\n";
  if (!fit.converged) {
    err << "error: lorentzian fit did not converge after " << fit.n_iter << " iterations\n";
    return 2;
  }
  return 0;
}

int cmd_calibrate(const RunConfig& cfg, const std::filesystem::path& spectrum_csv,
                  std::ostream& out, std::ostream&) {
  const SystemWithoutCoupling sys = cfg.system_without_coupling();
  const Spectrum spec = read_spectrum_csv(spectrum_csv);
  const CalibrationResult result = calibrate_coupling(spec, sys, cfg.temperature_k);
  out << calibration_to_json(result).dump(2) << "\n";
  return 0;
}

int sweep_exit_code(const SweepResult& sweep) {
  for (const SweepPoint& pt : sweep.points) {
    if (!pt.fit.converged || !pt.guard_ok) return 2;
  }
  return 0;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const OptomechSystem sys = cfg.system();
  require_powers(cfg);
  const fs::path dir = prepare_out_dir(cfg);

  const SweepResult sweep =
      run_sweep(sys, cfg.measurement(cfg.powers_w.front()), cfg.powers_w, cfg.seed);

  std::ostringstream csv;
  write_sweep_csv(sweep, csv);
  write_text_file(dir / "sweep.csv", csv.str());
  const nlohmann::ordered_json summary = sweep_summary_json(sweep);
  write_text_file(dir / "sweep_summary.json", summary.dump(2) + "\n");
  out << summary.dump(2) << "\n";

  const int code = sweep_exit_code(sweep);
  if (code != 0) {
    for (std::size_t i = 0; i < sweep.points.size(); ++i) {
      const SweepPoint& pt = sweep.points[i];
      if (!pt.fit.converged) {
        err << "error: point " << i << " (power " << pt.power_w << " W) did not converge\n";
      } else if (!pt.guard_ok) {
        err << "error: point " << i << " (power " << pt.power_w
            << " W) failed the linewidth guard\n";
      }
    }
  }
  return code;
}

}  // namespace optomech
