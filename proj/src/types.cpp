#include "optomech/types.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace optomech {

namespace {

void require_positive_finite(double v, const char* name) {
  if (!std::isfinite(v) || !(v > 0)) {
    throw std::invalid_argument(std::string(name) + " must be positive and finite");
  }
}

}  // namespace

void OptomechSystem::validate() const {
  require_positive_finite(cavity_freq_hz, "cavity_freq_hz");
  require_positive_finite(cavity_linewidth_hz, "cavity_linewidth_hz");
  require_positive_finite(mech_freq_hz, "mech_freq_hz");
  require_positive_finite(mech_linewidth_hz, "mech_linewidth_hz");
  require_positive_finite(coupling_hz, "coupling_hz");
  require_positive_finite(mass_kg, "mass_kg");
  if (!(mech_linewidth_hz < mech_freq_hz)) {
    throw std::invalid_argument("mech_linewidth_hz must be smaller than mech_freq_hz");
  }
}

void MeasurementConfig::validate() const {
  if (!std::isfinite(power_w) || power_w < 0) {
    throw std::invalid_argument("power_w must be non-negative and finite");
  }
  if (!std::isfinite(efficiency) || !(efficiency > 0) || efficiency > 1.0) {
    throw std::invalid_argument("efficiency must lie in (0, 1]");
  }
  require_positive_finite(temperature_k, "temperature_k");
  if (n_avg < 1) throw std::invalid_argument("n_avg must be >= 1");
  if (!std::isfinite(freq_start_hz) || !std::isfinite(freq_stop_hz) || freq_start_hz < 0 ||
      !(freq_start_hz < freq_stop_hz)) {
    throw std::invalid_argument("frequency grid must satisfy 0 <= freq_start_hz < freq_stop_hz");
  }
  if (n_bins < 2) throw std::invalid_argument("n_bins must be >= 2");
}

}  // namespace optomech
