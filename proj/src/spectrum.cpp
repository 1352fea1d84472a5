#include "optomech/spectrum.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace optomech {

const char* to_string(SpectrumUnit unit) {
  return unit == SpectrumUnit::displacement ? "displacement" : "phase";
}

std::optional<SpectrumUnit> spectrum_unit_from(std::string_view name) {
  if (name == "displacement") return SpectrumUnit::displacement;
  if (name == "phase") return SpectrumUnit::phase;
  return std::nullopt;
}

void Spectrum::validate() const {
  if (freqs_hz.size() != values.size()) {
    throw std::invalid_argument("spectrum frequency and value arrays differ in length");
  }
  if (freqs_hz.empty()) throw std::invalid_argument("spectrum is empty");
  if (n_avg < 1) throw std::invalid_argument("spectrum n_avg must be >= 1");
  for (std::size_t i = 0; i < freqs_hz.size(); ++i) {
    if (!std::isfinite(freqs_hz[i])) {
      throw std::invalid_argument("spectrum frequency at index " + std::to_string(i) +
                                  " is not finite");
    }
    if (i > 0 && !(freqs_hz[i] > freqs_hz[i - 1])) {
      throw std::invalid_argument("spectrum frequencies must increase strictly (index " +
                                  std::to_string(i) + ")");
    }
    if (!std::isfinite(values[i]) || values[i] < 0) {
      throw std::invalid_argument("spectrum value at index " + std::to_string(i) +
                                  " must be finite and non-negative");
    }
  }
}

}  // namespace optomech
