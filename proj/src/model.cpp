#include "entangle/model.hpp"

#include <cmath>
#include <string>

#include "entangle/errors.hpp"

namespace entangle {
namespace {

void require(bool ok, const std::string& what) {
    if (!ok) {
        throw Error(ErrorKind::Parameter, what);
    }
}

bool finite_positive(double x) { return std::isfinite(x) && x > 0.0; }

// Amplitudes per unit drive rate: <A+-> = Omega * unit_amplitudes().
std::pair<cdouble, cdouble> unit_amplitudes(const PolaritonBasis& b) {
    const double s = std::sin(b.theta);
    const double c = std::cos(b.theta);
    const cdouble dm(b.delta_minus, -b.kappa_minus);
    const cdouble dp(b.delta_plus, -b.kappa_plus);
    const cdouble denom = dm * dp + b.delta_kappa * b.delta_kappa;

    const double scale = std::abs(dm) * std::abs(dp) + b.delta_kappa * b.delta_kappa;
    if (!(std::abs(denom) > 1e-14 * scale) || !std::isfinite(std::abs(denom))) {
        throw Error(ErrorKind::SingularSteadyState,
                    "steady-state amplitudes: (Delta- - i kappa-)(Delta+ - i kappa+) + dkappa^2 vanishes");
    }
    const cdouble i(0.0, 1.0);
    const cdouble plus = (b.delta_kappa * c - i * s * dm) / denom;
    const cdouble minus = (b.delta_kappa * s - i * c * dp) / denom;
    return {plus, minus};
}

}  // namespace

void SystemParams::validate() const {
    require(finite_positive(omega_a), "omega_a must be finite and > 0");
    require(finite_positive(omega_c), "omega_c must be finite and > 0");
    require(finite_positive(omega_b), "omega_b must be finite and > 0");
    require(std::isfinite(g) && g >= 0.0, "g must be finite and >= 0");
    require(finite_positive(kappa_a), "kappa_a must be finite and > 0");
    require(finite_positive(kappa_c), "kappa_c must be finite and > 0");
    require(finite_positive(kappa_b), "kappa_b must be finite and > 0");
    require(std::isfinite(temperature) && temperature >= 0.0, "T must be finite and >= 0");
    require(std::isfinite(omega_0), "omega_0 must be finite");
    require(std::isfinite(drive_strength) && drive_strength >= 0.0, "drive strength must be finite and >= 0");
    require(finite_positive(g0), "g0 must be finite and > 0");
}

bool SystemParams::outside_dispersive_regime() const noexcept { return omega_b > omega_a / 10.0; }

PolaritonBasis hybridize(const SystemParams& p) {
    p.validate();

    PolaritonBasis b;
    const double detuning = p.omega_a - p.omega_c;
    // atan2 keeps 2 theta in [0, pi]; omega_a == omega_c gives exactly pi/4.
    b.theta = 0.5 * std::atan2(2.0 * p.g, detuning);
    const double splitting = std::hypot(detuning, 2.0 * p.g);
    b.omega_plus = 0.5 * (p.omega_a + p.omega_c + splitting);
    b.omega_minus = 0.5 * (p.omega_a + p.omega_c - splitting);
    b.delta_plus = b.omega_plus - p.omega_0;
    b.delta_minus = b.omega_minus - p.omega_0;

    const double s = std::sin(b.theta);
    const double c = std::cos(b.theta);
    b.omega_b = p.omega_b;
    b.kappa_a = p.kappa_a;
    b.kappa_c = p.kappa_c;
    b.kappa_plus = p.kappa_a * c * c + p.kappa_c * s * s;
    b.kappa_minus = p.kappa_a * s * s + p.kappa_c * c * c;
    b.delta_kappa = (p.kappa_c - p.kappa_a) * s * c;

    b.n_a = units::thermal_occupation(p.omega_a, p.temperature);
    b.n_c = units::thermal_occupation(p.omega_c, p.temperature);
    b.n_b = units::thermal_occupation(p.omega_b, p.temperature);

    // N+- = {[kappa_a w_a (2N_a+1) + kappa_c w_c (2N_c+1)] / kappa_pm - 1} / 2,
    // rewritten as a convex combination so theta = 0 reproduces N_a exactly.
    const double wa_plus = p.kappa_a * c * c / b.kappa_plus;
    const double wc_plus = p.kappa_c * s * s / b.kappa_plus;
    const double wa_minus = p.kappa_a * s * s / b.kappa_minus;
    const double wc_minus = p.kappa_c * c * c / b.kappa_minus;
    b.n_plus = wa_plus * b.n_a + wc_plus * b.n_c;
    b.n_minus = wa_minus * b.n_a + wc_minus * b.n_c;
    return b;
}

std::pair<double, double> solve_g_omega_c_from_theta(double theta, double omega_a, double omega_b) {
    if (!std::isfinite(theta) || theta <= 0.0 || theta >= units::pi / 2) {
        throw Error(ErrorKind::DegenerateHybridization,
                    "theta must lie strictly inside (0, pi/2); the endpoints need g = 0");
    }
    require(finite_positive(omega_a) && finite_positive(omega_b), "omega_a and omega_b must be > 0");
    const double g = omega_b * std::sin(2.0 * theta);
    const double omega_c = omega_a - 2.0 * omega_b * std::cos(2.0 * theta);
    return {g, omega_c};
}

EffectiveCouplings steady_state_amplitudes(const PolaritonBasis& basis, double omega_drive, double g0) {
    require(std::isfinite(omega_drive) && omega_drive >= 0.0, "drive rate Omega must be finite and >= 0");
    require(finite_positive(g0), "g0 must be finite and > 0");
    require(finite_positive(basis.omega_b), "basis.omega_b must be > 0");

    const auto [unit_plus, unit_minus] = unit_amplitudes(basis);
    const double s = std::sin(basis.theta);
    const double c = std::cos(basis.theta);
    const cdouble two_i(0.0, 2.0);

    EffectiveCouplings out;
    out.amp_plus = omega_drive * unit_plus;
    out.amp_minus = omega_drive * unit_minus;
    out.re_b = -(g0 / basis.omega_b) * std::norm(out.amp_plus * s + out.amp_minus * c);
    out.g_plus = two_i * g0 * out.amp_plus;
    out.g_minus = two_i * g0 * out.amp_minus;
    out.g_pm = out.g_plus * s + out.g_minus * c;
    out.g_plus_b = out.g_pm * s;
    out.g_minus_b = out.g_pm * c;
    return out;
}

EffectiveCouplings couplings_for_drive(const PolaritonBasis& basis, double drive_strength, double g0) {
    require(std::isfinite(drive_strength) && drive_strength >= 0.0, "drive strength must be finite and >= 0");
    require(finite_positive(g0), "g0 must be finite and > 0");
    return steady_state_amplitudes(basis, drive_strength / g0, g0);
}

double drive_for_target_g_minus(const PolaritonBasis& basis, double target_abs_g_minus) {
    require(std::isfinite(target_abs_g_minus) && target_abs_g_minus >= 0.0,
            "target |G-| must be finite and >= 0");
    const auto unit_minus = unit_amplitudes(basis).second;
    // |G-| = 2 G0 Omega |unit_minus| = 2 drive |unit_minus|
    const double per_drive = 2.0 * std::abs(unit_minus);
    if (!(per_drive > 0.0)) {
        throw Error(ErrorKind::NoSolution, "<A-> vanishes for every drive; |G-| cannot be pinned");
    }
    return target_abs_g_minus / per_drive;
}

}  // namespace entangle
