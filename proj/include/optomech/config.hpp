#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "optomech/calibrate.hpp"
#include "optomech/spectrum.hpp"
#include "optomech/types.hpp"

namespace optomech {

/// Parsed run configuration. JSON layout:
///
///   {
///     "system": { "cavity_freq_hz": "6.707GHz", "cavity_linewidth_hz": ...,
///                 "mech_freq_hz": ..., "mech_linewidth_hz": ...,
///                 "coupling_hz": ..., "mass_kg": "85pg" },
///     "measurement": { "power_w": "7.8nW" | "powers_w": [...],
///                      "efficiency": 0.02, "temperature_k": "40mK",
///                      "n_avg": 500, "freq_start_hz": ..., "freq_stop_hz": ...,
///                      "n_bins": 4096, "units": "displacement" },
///     "seed": 1,
///     "out_dir": "out"
///   }
///
/// Dimensioned values are plain SI numbers or metric-prefixed strings.
/// Parsing is strict: unknown keys anywhere are an error, as are missing
/// required keys. coupling_hz is optional (calibration finds it); power is
/// optional for commands that do not drive the probe.
struct RunConfig {
  double cavity_freq_hz = 0;
  double cavity_linewidth_hz = 0;
  double mech_freq_hz = 0;
  double mech_linewidth_hz = 0;
  std::optional<double> coupling_hz;
  double mass_kg = 0;

  std::vector<double> powers_w;
  double efficiency = 1.0;
  double temperature_k = 0;
  std::uint32_t n_avg = 1;
  double freq_start_hz = 0;
  double freq_stop_hz = 0;
  std::size_t n_bins = 0;
  SpectrumUnit synth_unit = SpectrumUnit::displacement;

  std::uint64_t seed = 1;
  std::string out_dir = ".";

  /// Throws std::invalid_argument when coupling_hz is absent.
  OptomechSystem system() const;
  SystemWithoutCoupling system_without_coupling() const;
  MeasurementConfig measurement(double power_w) const;
};

/// Built-in defaults: the reference device this tool models, probed at
/// {10 fW, 600 fW, 7.8 nW} with 2% efficiency at 40 mK, 4096 bins spanning
/// +/-50 mechanical linewidths, n_avg = 500, seed 1.
RunConfig default_run_config();

RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::filesystem::path& path);

enum class QuantityKind { power, frequency, temperature, mass, dimensionless };

/// Parse "7.8nW", "40mK", "9.357MHz", "85pg" or a bare SI number. The unit
/// letter must match the expected kind; prefixes f p n u m k M G T.
double parse_quantity(const std::string& text, QuantityKind kind);

}  // namespace optomech
