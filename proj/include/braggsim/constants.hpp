#pragma once

#include <cmath>
#include <numbers>

namespace braggsim {

// CODATA 2018 exact / recommended values.
namespace constants {
inline constexpr double c = 299792458.0;              // m/s, exact
inline constexpr double h = 6.62607015e-34;           // J s, exact
inline constexpr double hbar = 1.054571817e-34;       // J s
inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;
} // namespace constants

inline constexpr double wavelength_to_omega(double wavelength) {
  return constants::two_pi * constants::c / wavelength;
}

inline constexpr double omega_to_wavelength(double omega) {
  return constants::two_pi * constants::c / omega;
}

inline constexpr double photon_energy(double omega) { return constants::hbar * omega; }

inline constexpr double db_to_ratio(double db) { return std::pow(10.0, db / 10.0); }

} // namespace braggsim
