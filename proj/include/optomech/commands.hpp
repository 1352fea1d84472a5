#pragma once

#include <filesystem>
#include <iosfwd>
#include <ostream>

#include "optomech/budget.hpp"
#include "optomech/config.hpp"
#include "optomech/errors.hpp"

namespace optomech {

// Command implementations behind the CLI, separated from argument parsing so
// they can be driven directly in tests. Each returns the process exit code:
// 0 success, 1 usage/config/input error, 2 analysis-quality failure.

int cmd_budget(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_fit(const std::filesystem::path& spectrum_csv, std::ostream& out, std::ostream& err);
int cmd_calibrate(const RunConfig& cfg, const std::filesystem::path& spectrum_csv,
                  std::ostream& out, std::ostream& err);
int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// 0 when every point converged with the linewidth guard satisfied, else 2.
int sweep_exit_code(const SweepResult& sweep);

/// Run a command body and map exceptions to the exit-code contract.
template <typename Fn>
int run_guarded(Fn&& fn, std::ostream& err) {
  try {
    return fn();
  } catch (const AnalysisError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace optomech
