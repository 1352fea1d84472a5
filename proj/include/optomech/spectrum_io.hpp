#pragma once

#include <filesystem>
#include <iosfwd>

#include "optomech/spectrum.hpp"

namespace optomech {

// Canonical CSV layout: metadata once in comment lines, then two columns.
//
//   # unit=displacement
//   # n_avg=500
//   # seed=1              (absent for noise-free spectra)
//   freq_hz,psd
//   9355780,4.1e-31
//
// The reader also accepts the long form with the metadata repeated per row
// under the header freq_hz,psd,unit,n_avg,seed (empty seed = noise-free).
// Parse failures throw ParseError naming the offending row.

void write_spectrum_csv(const Spectrum& spec, std::ostream& out);
void write_spectrum_csv(const Spectrum& spec, const std::filesystem::path& path);

Spectrum read_spectrum_csv(std::istream& in);
Spectrum read_spectrum_csv(const std::filesystem::path& path);

}  // namespace optomech
