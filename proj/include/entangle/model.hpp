#pragma once

// Bare parameters of the driven three-mode system and the closed-form
// hybridization / steady-state relations built on them.
//
// Convention: every frequency, coupling and rate in this header is angular
// (rad/s); temperatures are in kelvin.

#include <complex>
#include <utility>

#include "entangle/units.hpp"

namespace entangle {

using cdouble = std::complex<double>;

inline constexpr double kDefaultG0 = units::two_pi * 1e-3;  // G0/2pi = 1 mHz

struct SystemParams {
    double omega_a = 0.0;  ///< mode a (e.g. cavity)
    double omega_c = 0.0;  ///< mode c, the driven one
    double omega_b = 0.0;  ///< low-frequency mode b
    double g = 0.0;        ///< a-c beam-splitter coupling
    double kappa_a = 0.0;
    double kappa_c = 0.0;
    double kappa_b = 0.0;
    double temperature = 0.0;     ///< bath temperature (K)
    double omega_0 = 0.0;         ///< drive frequency
    double drive_strength = 0.0;  ///< G0 * Omega (rad^2/s^2)
    double g0 = kDefaultG0;       ///< bare dispersive coupling; only feeds Re<b>

    /// Throws Error(Parameter) on non-finite values, non-positive
    /// frequencies/rates, negative g, T or drive.
    void validate() const;

    /// True when omega_b is not small against the hybridized modes
    /// (omega_b > omega_a / 10). Not an error; callers may warn.
    bool outside_dispersive_regime() const noexcept;
};

struct PolaritonBasis {
    double theta = 0.0;  ///< mixing angle in [0, pi/2]
    double omega_plus = 0.0;
    double omega_minus = 0.0;
    double delta_plus = 0.0;   ///< omega_plus - omega_0
    double delta_minus = 0.0;  ///< omega_minus - omega_0
    double kappa_plus = 0.0;
    double kappa_minus = 0.0;
    double delta_kappa = 0.0;  ///< (kappa_c - kappa_a) sin(theta) cos(theta)
    // Bare quantities carried along for Re<b> and the noise cross-correlation.
    double omega_b = 0.0;
    double kappa_a = 0.0;
    double kappa_c = 0.0;
    double n_a = 0.0;
    double n_c = 0.0;
    double n_b = 0.0;
    double n_plus = 0.0;
    double n_minus = 0.0;
};

struct EffectiveCouplings {
    cdouble amp_plus;   ///< <A+>
    cdouble amp_minus;  ///< <A->
    double re_b = 0.0;  ///< Re<b>, diagnostic only
    cdouble g_plus;     ///< G+ = 2i G0 <A+>
    cdouble g_minus;    ///< G- = 2i G0 <A->
    cdouble g_pm;       ///< G+ sin(theta) + G- cos(theta)
    cdouble g_plus_b;   ///< g_pm sin(theta)
    cdouble g_minus_b;  ///< g_pm cos(theta)
};

/// Mixing angle, polariton frequencies, detunings, dissipation rates and
/// thermal occupations. theta = atan2(2g, omega_a - omega_c) / 2 so that
/// theta lies in [0, pi/2] (pi/4 when omega_a == omega_c).
PolaritonBasis hybridize(const SystemParams& params);

/// Inverts the mixing relation for a polariton splitting of 2 omega_b:
/// g = omega_b sin(2 theta), omega_c = omega_a - 2 omega_b cos(2 theta).
/// Returns {g, omega_c}. Throws Error(DegenerateHybridization) unless
/// 0 < theta < pi/2.
std::pair<double, double> solve_g_omega_c_from_theta(double theta, double omega_a, double omega_b);

/// Approximate steady-state polariton amplitudes (resolved-sideband regime
/// |Delta_pm| ~ omega_b >> kappa_pm) and the resulting linearized couplings.
/// `omega_drive` is the drive rate Omega, `g0` the bare dispersive coupling.
EffectiveCouplings steady_state_amplitudes(const PolaritonBasis& basis, double omega_drive, double g0);

/// Same, parametrized by the product G0 * Omega; G0 only enters Re<b>.
EffectiveCouplings couplings_for_drive(const PolaritonBasis& basis, double drive_strength, double g0);

/// The drive_strength (G0 * Omega) at which |G-| equals `target_abs_g_minus`.
/// <A-> is linear in Omega, so this is a single division.
double drive_for_target_g_minus(const PolaritonBasis& basis, double target_abs_g_minus);

}  // namespace entangle
