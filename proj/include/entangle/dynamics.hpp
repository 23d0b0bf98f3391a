#pragma once

#include <optional>

#include "entangle/gaussian.hpp"
#include "entangle/model.hpp"

namespace entangle {

/// Drift of the linearized quadrature fluctuations u = (X+, Y+, X-, Y-, Xb, Yb).
/// The polariton block couples only through -delta_kappa; Xb feeds nothing
/// back (row 5 has no G-dependence).
DriftMatrix build_drift(const PolaritonBasis& basis, const EffectiveCouplings& couplings, double omega_b,
                        double kappa_b);

/// Diffusion matrix. The polariton cross term is written as
/// (1/2) sin(2 theta) [kappa_c (2 N_c + 1) - kappa_a (2 N_a + 1)], which equals
/// (1/2) tan(2 theta) [-kappa+ (2N+ + 1) + kappa- (2N- + 1)] and stays finite at
/// theta = pi/4.
DiffusionMatrix build_diffusion(const PolaritonBasis& basis, double kappa_b, double n_b);

/// Parameters for one evaluation. When `target_abs_g_minus` is set the drive
/// strength in `params` is ignored and derived so that |G-| hits the target.
struct PipelineSpec {
    SystemParams params;
    std::optional<double> target_abs_g_minus;
};

struct PipelineResult {
    PolaritonBasis basis;
    EffectiveCouplings couplings;
    GaussianState state;
    double drive_strength = 0.0;
    // Present iff state.stable.
    std::optional<double> e_n_pp;  ///< (A+, A-)
    std::optional<double> e_n_mb;  ///< (A-, b)
    std::optional<double> e_n_pb;  ///< (A+, b)
    std::optional<double> lyapunov_residual;
    std::optional<double> physicality;  ///< min eig of V + iJ/2
};

/// Full parameter -> entanglement evaluation. Unstable points come back
/// flagged (state.stable == false, no E_N); model and solver failures are
/// rethrown with the failing stage prefixed to the message.
PipelineResult run_pipeline(const PipelineSpec& spec);

}  // namespace entangle
