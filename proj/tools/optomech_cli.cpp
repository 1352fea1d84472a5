#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "optomech/commands.hpp"
#include "optomech/config.hpp"

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out_dir;
  std::string power;
  std::uint64_t seed = 0;
  bool seed_set = false;
  bool out_set = false;
  bool power_set = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "JSON run configuration (defaults built in)");
  cmd->add_option("--seed", opts.seed, "override the config seed")
      ->each([&opts](const std::string&) { opts.seed_set = true; });
  cmd->add_option("--out", opts.out_dir, "override the output directory")
      ->each([&opts](const std::string&) { opts.out_set = true; });
  cmd->add_option("--power", opts.power,
                  "override the probe power, e.g. 7.8e-9 or 7.8nW (single power)")
      ->each([&opts](const std::string&) { opts.power_set = true; });
}

optomech::RunConfig resolve_config(const CommonOpts& opts) {
  optomech::RunConfig cfg = opts.config_path.empty()
                                ? optomech::default_run_config()
                                : optomech::load_run_config(opts.config_path);
  if (opts.seed_set) cfg.seed = opts.seed;
  if (opts.out_set) cfg.out_dir = opts.out_dir;
  if (opts.power_set) {
    cfg.powers_w = {optomech::parse_quantity(opts.power, optomech::QuantityKind::power)};
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Continuous linear displacement measurement: noise budgets, synthetic spectra,"
               " lorentzian fits, coupling calibration and power sweeps"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::string spectrum_path;

  CLI::App* budget = app.add_subcommand("budget", "print the closed-form noise budget as JSON");
  add_common(budget, opts);
  CLI::App* simulate =
      app.add_subcommand("simulate", "synthesize noisy spectra to CSV, one file per power");
  add_common(simulate, opts);
  CLI::App* fit = app.add_subcommand("fit", "fit a lorentzian to a spectrum CSV, print JSON");
  add_common(fit, opts);
  fit->add_option("spectrum", spectrum_path, "input spectrum CSV")->required();
  CLI::App* calibrate = app.add_subcommand(
      "calibrate", "extract the vacuum coupling rate from a phase spectrum CSV");
  add_common(calibrate, opts);
  calibrate->add_option("spectrum", spectrum_path, "input phase spectrum CSV")->required();
  CLI::App* sweep =
      app.add_subcommand("sweep", "synthesize and fit every configured power, write sweep.csv");
  add_common(sweep, opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  return optomech::run_guarded(
      [&]() -> int {
        if (budget->parsed()) return optomech::cmd_budget(resolve_config(opts), std::cout, std::cerr);
        if (simulate->parsed())
          return optomech::cmd_simulate(resolve_config(opts), std::cout, std::cerr);
        if (fit->parsed()) return optomech::cmd_fit(spectrum_path, std::cout, std::cerr);
        if (calibrate->parsed())
          return optomech::cmd_calibrate(resolve_config(opts), spectrum_path, std::cout, std::cerr);
        if (sweep->parsed()) return optomech::cmd_sweep(resolve_config(opts), std::cout, std::cerr);
        return 1;
      },
      std::cerr);
}
