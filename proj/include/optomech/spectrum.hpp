#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace optomech {

/// Physical unit of a noise spectrum: displacement PSD (m^2/Hz) or phase PSD
/// (rad^2/Hz) of the probe field.
enum class SpectrumUnit { displacement, phase };

const char* to_string(SpectrumUnit unit);
std::optional<SpectrumUnit> spectrum_unit_from(std::string_view name);

/// A one-sided noise spectrum on a strictly increasing frequency grid.
/// n_avg is the number of averaged periodograms behind each bin; a spectrum
/// without a seed is noise-free (an exact model curve).
struct Spectrum {
  std::vector<double> freqs_hz;
  std::vector<double> values;
  SpectrumUnit unit = SpectrumUnit::displacement;
  std::uint32_t n_avg = 1;
  std::optional<std::uint64_t> seed;

  /// Throws std::invalid_argument unless grids match, frequencies increase
  /// strictly, values are finite and non-negative, and n_avg >= 1.
  void validate() const;
};

}  // namespace optomech
