#include "entangle/dynamics.hpp"

#include <cmath>
#include <string>

#include "entangle/errors.hpp"

namespace entangle {
namespace {

template <typename F>
auto in_stage(const char* stage, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const Error& e) {
        throw Error(e.kind(), std::string(stage) + ": " + e.what());
    }
}

}  // namespace

DriftMatrix build_drift(const PolaritonBasis& b, const EffectiveCouplings& k, double omega_b, double kappa_b) {
    const double kp = b.kappa_plus;
    const double km = b.kappa_minus;
    const double dk = b.delta_kappa;
    const double dp = b.delta_plus;
    const double dm = b.delta_minus;
    const double gpr = k.g_plus_b.real();
    const double gpi = k.g_plus_b.imag();
    const double gmr = k.g_minus_b.real();
    const double gmi = k.g_minus_b.imag();

    DriftMatrix r;
    // clang-format off
    r <<  -kp,   dp,  -dk,  0.0, -gpr,      0.0,
          -dp,  -kp,  0.0,  -dk, -gpi,      0.0,
          -dk,  0.0,  -km,   dm, -gmr,      0.0,
          0.0,  -dk,  -dm,  -km, -gmi,      0.0,
          0.0,  0.0,  0.0,  0.0, -kappa_b,  omega_b,
         -gpi,  gpr, -gmi,  gmr, -omega_b, -kappa_b;
    // clang-format on
    return r;
}

DiffusionMatrix build_diffusion(const PolaritonBasis& b, double kappa_b, double n_b) {
    const double dplus = b.kappa_plus * (2.0 * b.n_plus + 1.0);
    const double dminus = b.kappa_minus * (2.0 * b.n_minus + 1.0);
    const double dmech = kappa_b * (2.0 * n_b + 1.0);
    const double cross = 0.5 * std::sin(2.0 * b.theta) *
                         (b.kappa_c * (2.0 * b.n_c + 1.0) - b.kappa_a * (2.0 * b.n_a + 1.0));

    DiffusionMatrix d = DiffusionMatrix::Zero();
    d.diagonal() << dplus, dplus, dminus, dminus, dmech, dmech;
    d(0, 2) = d(2, 0) = cross;
    d(1, 3) = d(3, 1) = cross;
    return d;
}

PipelineResult run_pipeline(const PipelineSpec& spec) {
    const SystemParams& p = spec.params;
    PipelineResult out;

    out.basis = in_stage("hybridize", [&] { return hybridize(p); });

    out.drive_strength = p.drive_strength;
    if (spec.target_abs_g_minus) {
        out.drive_strength =
            in_stage("drive inversion", [&] { return drive_for_target_g_minus(out.basis, *spec.target_abs_g_minus); });
    }
    out.couplings =
        in_stage("steady state", [&] { return couplings_for_drive(out.basis, out.drive_strength, p.g0); });

    // Solve in units of omega_b; V is dimensionless and unaffected.
    const double scale = 1.0 / p.omega_b;
    const DriftMatrix drift = build_drift(out.basis, out.couplings, p.omega_b, p.kappa_b) * scale;
    const DiffusionMatrix diffusion = build_diffusion(out.basis, p.kappa_b, out.basis.n_b) * scale;

    const StabilityReport report = in_stage("drift spectrum", [&] { return stability(drift); });
    out.state.stable = report.stable;
    out.state.max_re_eig = report.max_re_eig * p.omega_b;
    if (!report.stable) {
        return out;
    }

    out.state.covariance = in_stage("lyapunov", [&] { return solve_lyapunov(drift, diffusion); });
    out.lyapunov_residual = lyapunov_relative_residual(drift, out.state.covariance, diffusion);

    in_stage("log negativity", [&] {
        const Mat6& v = out.state.covariance;
        out.e_n_pp = log_negativity(reduce_two_mode(v, ModePair::PlusMinus));
        out.e_n_mb = log_negativity(reduce_two_mode(v, ModePair::MinusB));
        out.e_n_pb = log_negativity(reduce_two_mode(v, ModePair::PlusB));
        out.physicality = physicality_margin(v);
        return 0;
    });
    return out;
}

}  // namespace entangle
