#pragma once

#include <numbers>

namespace optomech::constants {

// CODATA 2018 values, SI units. Fixed at compile time; nothing overrides them.
inline constexpr double hbar = 1.054571817e-34;  // reduced Planck constant, J s
inline constexpr double k_b = 1.380649e-23;      // Boltzmann constant, J/K

inline constexpr double two_pi = 2.0 * std::numbers::pi;

}  // namespace optomech::constants
