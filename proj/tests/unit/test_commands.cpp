#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "optomech/budget.hpp"
#include "optomech/calibrate.hpp"
#include "optomech/commands.hpp"
#include "optomech/config.hpp"
#include "optomech/fit.hpp"
#include "optomech/physics.hpp"
#include "optomech/serialize.hpp"
#include "optomech/spectrum_io.hpp"
#include "optomech/synth.hpp"
#include "support/oracles.hpp"

using namespace optomech;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() / ("optomech_test_" + tag);
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

RunConfig small_config() {
  RunConfig cfg = default_run_config();
  cfg.n_bins = 1024;
  return cfg;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> stdout_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

}  // namespace

TEST_CASE("budget command reports the library numbers verbatim") {
  const RunConfig cfg = small_config();
  std::ostringstream out, err;
  REQUIRE(cmd_budget(cfg, out, err) == 0);
  CHECK(err.str().empty());

  const auto report = nlohmann::json::parse(out.str());
  const OptomechSystem sys = cfg.system();
  // doubles survive the JSON round trip exactly
  CHECK(report["x_zp"].get<double>() == zero_point_motion(sys));
  CHECK(report["s_zp"].get<double>() == zero_point_psd(sys));
  CHECK(report["p_sql"].get<double>() == sql_power(sys));
  CHECK(report["n_th"].get<double>() == thermal_occupancy(sys, cfg.temperature_k));
  CHECK(report["optimum_power"].get<double>() == optimum_power(sys, cfg.efficiency));
  CHECK(report["system"]["coupling_hz"].get<double>() == 230.0);

  REQUIRE(report["budgets"].size() == cfg.powers_w.size());
  for (std::size_t i = 0; i < cfg.powers_w.size(); ++i) {
    const NoiseBudget b = noise_budget(sys, cfg.measurement(cfg.powers_w[i]));
    const auto& row = report["budgets"][i];
    CHECK(row["power_w"].get<double>() == cfg.powers_w[i]);
    CHECK(row["s_imp"].get<double>() == b.s_imp);
    CHECK(row["s_total"].get<double>() == b.s_total);
    CHECK(row["n_ba"].get<double>() == b.n_ba);
  }
}

TEST_CASE("budget command maps a powered-off entry to JSON nulls") {
  RunConfig cfg = small_config();
  cfg.powers_w = {0.0, 7.8e-9};
  std::ostringstream out, err;
  REQUIRE(cmd_budget(cfg, out, err) == 0);
  const auto report = nlohmann::json::parse(out.str());
  CHECK(report["budgets"][0]["s_imp"].is_null());
  CHECK(report["budgets"][0]["s_total"].is_null());
  CHECK(report["budgets"][0]["imprecision_over_zp_db"].is_null());
  CHECK(report["budgets"][1]["s_imp"].is_number());
}

TEST_CASE("simulate writes one spectrum per power; floors track the probe") {
  TempDir dir("simulate");
  RunConfig cfg = small_config();
  cfg.out_dir = dir.path.string();
  cfg.powers_w = {1e-15, 1e-14, 1e-13, 1e-12, 1e-11};
  cfg.seed = 4;

  std::ostringstream out, err;
  REQUIRE(cmd_simulate(cfg, out, err) == 0);
  const auto lines = stdout_lines(out.str());
  REQUIRE(lines.size() == cfg.powers_w.size());

  double prev_floor = 0;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    REQUIRE(fs::exists(lines[i]));
    const Spectrum spec = read_spectrum_csv(fs::path(lines[i]));
    CHECK(spec.n_avg == cfg.n_avg);
    REQUIRE(spec.seed.has_value());
    CHECK(*spec.seed == (cfg.seed ^ static_cast<std::uint64_t>(i)));
    const LorentzianFit fit = fit_lorentzian(spec);
    REQUIRE(fit.converged);
    if (i > 0) CHECK(fit.floor < prev_floor);
    prev_floor = fit.floor;
  }
}

TEST_CASE("simulate output is byte-identical across runs") {
  TempDir dir_a("sim_a");
  TempDir dir_b("sim_b");
  RunConfig cfg = small_config();
  cfg.powers_w = {1e-14, 1e-13};
  cfg.seed = 7;

  std::ostringstream out_a, out_b, err;
  cfg.out_dir = dir_a.path.string();
  REQUIRE(cmd_simulate(cfg, out_a, err) == 0);
  cfg.out_dir = dir_b.path.string();
  REQUIRE(cmd_simulate(cfg, out_b, err) == 0);

  for (const char* name : {"spectrum_000.csv", "spectrum_001.csv"}) {
    const std::string a = slurp(dir_a.path / name);
    const std::string b = slurp(dir_b.path / name);
    CHECK(!a.empty());
    CHECK(a == b);
  }
}

TEST_CASE("simulate honors the phase-unit request") {
  TempDir dir("sim_phase");
  RunConfig cfg = small_config();
  cfg.out_dir = dir.path.string();
  cfg.powers_w = {1e-14};
  cfg.synth_unit = SpectrumUnit::phase;
  std::ostringstream out, err;
  REQUIRE(cmd_simulate(cfg, out, err) == 0);
  const Spectrum spec = read_spectrum_csv(dir.path / "spectrum_000.csv");
  CHECK(spec.unit == SpectrumUnit::phase);
}

TEST_CASE("fit command: clean record in, parameters and exit zero out") {
  TempDir dir("fit_ok");
  SynthRequest req;
  req.system = oracle::device();
  req.config = small_config().measurement(1e-13);
  req.seed = 12;
  const fs::path csv = dir.path / "line.csv";
  write_spectrum_csv(synthesize(req), csv);

  std::ostringstream out, err;
  REQUIRE(cmd_fit(csv, out, err) == 0);
  const auto j = nlohmann::json::parse(out.str());
  CHECK(j["converged"].get<bool>());
  const LorentzianFit direct = fit_lorentzian(synthesize(req));
  CHECK(j["floor"].get<double>() == direct.floor);
  CHECK(j["height"].get<double>() == direct.height);
  CHECK(j["center"].get<double>() == direct.center);
  CHECK(j["linewidth"].get<double>() == direct.linewidth);
}

TEST_CASE("fit command: a spike record cannot converge and exits two") {
  TempDir dir("fit_bad");
  const fs::path csv = dir.path / "spike.csv";
  {
    std::ofstream f(csv);
    f << "# unit=displacement\n# n_avg=500\nfreq_hz,psd\n";
    for (int i = 0; i < 64; ++i) {
      f << (1000 + i) << ',' << (i == 32 ? 1000.0 : 1.0) << "\n";
    }
  }
  std::ostringstream out, err;
  CHECK(cmd_fit(csv, out, err) == 2);
  CHECK(err.str().find("did not converge") != std::string::npos);
  // the result is still reported for inspection
  const auto j = nlohmann::json::parse(out.str());
  CHECK(!j["converged"].get<bool>());
}

TEST_CASE("fit command: a missing file maps to exit one through the guard") {
  std::ostringstream out, err;
  const int rc = run_guarded(
      [&] { return cmd_fit(fs::path("/nonexistent/never.csv"), out, err); }, err);
  CHECK(rc == 1);
  CHECK(!err.str().empty());
}

TEST_CASE("calibrate command recovers the coupling from a phase record") {
  TempDir dir("calibrate");
  const auto sys = oracle::device();
  SynthRequest req;
  req.system = sys;
  req.config = small_config().measurement(1e-14);
  req.seed = 21;
  const Spectrum phi = displacement_to_phase(sys, synthesize(req));
  const fs::path csv = dir.path / "phase.csv";
  write_spectrum_csv(phi, csv);

  RunConfig cfg = small_config();
  cfg.coupling_hz.reset();

  std::ostringstream out, err;
  REQUIRE(cmd_calibrate(cfg, csv, out, err) == 0);
  const auto j = nlohmann::json::parse(out.str());
  const double g0 = j["g0"].get<double>();
  const double sigma = j["g0_uncertainty"].get<double>();
  CHECK(sigma > 0.0);
  CHECK(std::abs(g0 - sys.coupling_hz) < 3.0 * sigma + 0.001 * sys.coupling_hz);

  // a displacement record is a usage error, not an analysis failure
  const fs::path xcsv = dir.path / "disp.csv";
  write_spectrum_csv(synthesize(req), xcsv);
  std::ostringstream out2, err2;
  const int rc = run_guarded([&] { return cmd_calibrate(cfg, xcsv, out2, err2); }, err2);
  CHECK(rc == 1);
  CHECK(!err2.str().empty());
}

TEST_CASE("sweep command writes artifacts consistent with the library") {
  TempDir dir("sweep");
  RunConfig cfg = small_config();
  cfg.out_dir = dir.path.string();
  cfg.powers_w = {1e-14, 1e-13, 1e-12};
  cfg.seed = 31;

  std::ostringstream out, err;
  REQUIRE(cmd_sweep(cfg, out, err) == 0);
  REQUIRE(fs::exists(dir.path / "sweep.csv"));
  REQUIRE(fs::exists(dir.path / "sweep_summary.json"));

  const SweepResult direct = run_sweep(cfg.system(), cfg.measurement(cfg.powers_w.front()),
                                       cfg.powers_w, cfg.seed);

  // csv rows round-trip the fitted numbers exactly (%.17g)
  std::ifstream csv(dir.path / "sweep.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header ==
        "power_w,s_imp_model,s_ba_model,s_th_model,s_zp,floor_fit,height_fit,linewidth_fit,"
        "guard_ok,converged");
  for (const SweepPoint& pt : direct.points) {
    std::string row;
    REQUIRE(std::getline(csv, row));
    std::istringstream fields(row);
    std::string tok;
    std::vector<std::string> cols;
    while (std::getline(fields, tok, ',')) cols.push_back(tok);
    REQUIRE(cols.size() == 10);
    CHECK(std::stod(cols[0]) == pt.power_w);
    CHECK(std::stod(cols[1]) == pt.budget.s_imp);
    CHECK(std::stod(cols[5]) == pt.fit.floor);
    CHECK(std::stod(cols[6]) == pt.fit.height);
    CHECK(std::stod(cols[7]) == pt.fit.linewidth);
    CHECK(cols[8] == (pt.guard_ok ? "1" : "0"));
    CHECK(cols[9] == (pt.fit.converged ? "1" : "0"));
  }

  // printed summary equals the file and matches the direct run
  const auto summary = nlohmann::json::parse(slurp(dir.path / "sweep_summary.json"));
  CHECK(nlohmann::json::parse(out.str()) == summary);
  CHECK(summary["n_points"].get<std::size_t>() == cfg.powers_w.size());
  CHECK(summary["n_converged"].get<std::size_t>() == cfg.powers_w.size());
  CHECK(summary["n_guard_ok"].get<std::size_t>() == cfg.powers_w.size());
  CHECK(summary["crossover_power_w"].get<double>() ==
        crossover_power(direct.system, direct.base_config));
}

TEST_CASE("sweep command flags guard failures with exit two but keeps going") {
  TempDir dir("sweep_bad");
  RunConfig cfg = small_config();
  cfg.out_dir = dir.path.string();
  // a grid this coarse cannot pin the linewidth to five percent
  cfg.freq_start_hz = 9.357e6 - 10.0 * 24.4;
  cfg.freq_stop_hz = 9.357e6 + 10.0 * 24.4;
  cfg.n_bins = 56;
  cfg.n_avg = 2;
  cfg.powers_w = {1e-14, 1e-13, 1e-12, 1e-11};
  cfg.seed = 5;

  std::ostringstream out, err;
  CHECK(cmd_sweep(cfg, out, err) == 2);
  CHECK(!err.str().empty());
  // every point still produced a row
  const auto summary = nlohmann::json::parse(slurp(dir.path / "sweep_summary.json"));
  CHECK(summary["n_points"].get<std::size_t>() == cfg.powers_w.size());
  CHECK(summary["n_guard_ok"].get<std::size_t>() < cfg.powers_w.size());
}

TEST_CASE("full-range sweep summary reports the headline decibel figures") {
  RunConfig cfg = small_config();  // powers {10 fW, 600 fW, 7.8 nW}
  const SweepResult sweep = run_sweep(cfg.system(), cfg.measurement(cfg.powers_w.front()),
                                      cfg.powers_w, cfg.seed);
  const auto summary = sweep_summary_json(sweep);
  CHECK(std::abs(summary["max_backaction_over_thermal_db"].get<double>() - 24.0) < 1.0);
  CHECK(std::abs(summary["min_imprecision_over_zp_db"].get<double>() + 35.0) < 1.0);
}

TEST_CASE("sweep exit code demands convergence and guard on every point") {
  SweepResult sweep;
  sweep.points.resize(2);
  sweep.points[0].fit.converged = true;
  sweep.points[0].guard_ok = true;
  sweep.points[1].fit.converged = true;
  sweep.points[1].guard_ok = true;
  CHECK(sweep_exit_code(sweep) == 0);
  sweep.points[1].guard_ok = false;
  CHECK(sweep_exit_code(sweep) == 2);
  sweep.points[1].guard_ok = true;
  sweep.points[1].fit.converged = false;
  CHECK(sweep_exit_code(sweep) == 2);
}
