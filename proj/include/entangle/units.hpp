#pragma once

#include <numbers>

namespace entangle::units {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// CODATA 2018 exact/recommended values.
inline constexpr double hbar = 1.054571817e-34;  // J s
inline constexpr double k_boltzmann = 1.380649e-23;  // J/K

// Ordinary frequency (Hz) to angular frequency (rad/s) and back.
constexpr double angular(double hz) noexcept { return two_pi * hz; }
constexpr double ordinary(double rad_per_s) noexcept { return rad_per_s / two_pi; }

constexpr double kelvin_from_millikelvin(double mk) noexcept { return mk * 1e-3; }

/// Mean Bose-Einstein occupation of a mode at angular frequency `omega` in a
/// bath at `temperature` (K). Exactly 0 at T = 0.
double thermal_occupation(double omega, double temperature);

}  // namespace entangle::units
