#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

#include "entangle/dynamics.hpp"
#include "entangle/errors.hpp"
#include "oracles.hpp"

using namespace entangle;
using units::angular;
using units::pi;

namespace {

PipelineSpec paper_point(double theta) {
    PipelineSpec s;
    SystemParams& p = s.params;
    p.omega_a = angular(10e9);
    p.omega_b = angular(10e6);
    const auto [g, wc] = solve_g_omega_c_from_theta(theta, p.omega_a, p.omega_b);
    p.g = g;
    p.omega_c = wc;
    p.kappa_a = p.kappa_c = angular(1e6);
    p.kappa_b = angular(100);
    p.temperature = 0.010;
    p.omega_0 = 0.5 * (p.omega_a + p.omega_c);
    s.target_abs_g_minus = angular(2e6);
    return s;
}

// Mean-field right-hand side of the linearized fluctuation equations in the
// complex amplitudes, mapped back to quadratures X = sqrt2 Re a, Y = sqrt2 Im a.
Vec6 complex_rhs(const PolaritonBasis& b, const EffectiveCouplings& k, double omega_b, double kappa_b, const Vec6& u) {
    const cdouble i(0, 1);
    const double r2 = std::sqrt(2.0);
    const cdouble ap = cdouble(u[0], u[1]) / r2;
    const cdouble am = cdouble(u[2], u[3]) / r2;
    const cdouble bb = cdouble(u[4], u[5]) / r2;
    const cdouble xb_half = (bb + std::conj(bb)) / 2.0;
    const cdouble dap = -(i * b.delta_plus + b.kappa_plus) * ap - b.delta_kappa * am - k.g_plus_b * xb_half;
    const cdouble dam = -(i * b.delta_minus + b.kappa_minus) * am - b.delta_kappa * ap - k.g_minus_b * xb_half;
    const cdouble h = k.g_plus_b / 2.0 * std::conj(ap) + k.g_minus_b / 2.0 * std::conj(am);
    const cdouble dbb = -(i * omega_b + kappa_b) * bb - (h - std::conj(h));
    Vec6 out;
    out << r2 * dap.real(), r2 * dap.imag(), r2 * dam.real(), r2 * dam.imag(), r2 * dbb.real(), r2 * dbb.imag();
    return out;
}

}  // namespace

TEST_CASE("drift: uncoupled limit") {
    const PipelineSpec s = paper_point(0.35 * pi);
    const auto b = hybridize(s.params);
    const DriftMatrix r = build_drift(b, EffectiveCouplings{}, s.params.omega_b, s.params.kappa_b);
    Eigen::EigenSolver<Mat6> es(r);
    auto ev = es.eigenvalues();
    std::vector<cdouble> expected{{-b.kappa_plus, b.delta_plus},   {-b.kappa_plus, -b.delta_plus},
                                  {-b.kappa_minus, b.delta_minus}, {-b.kappa_minus, -b.delta_minus},
                                  {-s.params.kappa_b, s.params.omega_b}, {-s.params.kappa_b, -s.params.omega_b}};
    for (const auto& e : expected) {
        double best = 1e300;
        for (int j = 0; j < 6; ++j) {
            best = std::min(best, std::abs(ev[j] - e));
        }
        CHECK(best < 1e-9 * s.params.omega_b);
    }
}

TEST_CASE("drift: reproduces the fluctuation equations") {
    const PipelineSpec s = paper_point(0.40 * pi);
    auto b = hybridize(s.params);
    b.delta_kappa = angular(0.3e6);  // exercise the dissipative coupling too
    const double drive = drive_for_target_g_minus(b, angular(2e6));
    const auto k = couplings_for_drive(b, drive, s.params.g0);
    const DriftMatrix r = build_drift(b, k, s.params.omega_b, s.params.kappa_b);
    std::mt19937_64 rng(1);
    std::normal_distribution<double> n(0, 1);
    for (int t = 0; t < 10; ++t) {
        Vec6 u;
        for (int j = 0; j < 6; ++j) {
            u[j] = n(rng);
        }
        const Vec6 ref = complex_rhs(b, k, s.params.omega_b, s.params.kappa_b, u);
        CHECK((r * u - ref).norm() <= 1e-8 * ref.norm());
    }
}

TEST_CASE("drift: zero pattern") {
    const PipelineSpec s = paper_point(0.40 * pi);
    PolaritonBasis b = hybridize(s.params);
    b.delta_kappa = 0.123;
    const auto k = couplings_for_drive(b, drive_for_target_g_minus(b, angular(2e6)), s.params.g0);
    const DriftMatrix r = build_drift(b, k, s.params.omega_b, s.params.kappa_b);
    for (int i = 0; i < 4; ++i) {
        CHECK(r(i, 5) == 0.0);
        CHECK(r(4, i) == 0.0);
    }
    // only -delta_kappa links the polariton blocks
    CHECK(r(0, 2) == -0.123);
    CHECK(r(1, 3) == -0.123);
    CHECK(r(2, 0) == -0.123);
    CHECK(r(3, 1) == -0.123);
    CHECK(r(0, 3) == 0.0);
    CHECK(r(1, 2) == 0.0);
    CHECK(r(2, 1) == 0.0);
    CHECK(r(3, 0) == 0.0);
    CHECK(r(5, 0) == -k.g_plus_b.imag());
    CHECK(r(5, 1) == k.g_plus_b.real());
    CHECK(r(5, 2) == -k.g_minus_b.imag());
    CHECK(r(5, 3) == k.g_minus_b.real());
    CHECK(r(5, 4) == -s.params.omega_b);
    CHECK(r(5, 5) == -s.params.kappa_b);
}

TEST_CASE("diffusion") {
    PipelineSpec s = paper_point(0.40 * pi);
    SUBCASE("balanced baths give a diagonal matrix") {
        s.params.temperature = 0.0;
        const auto b = hybridize(s.params);
        REQUIRE(b.n_a == b.n_c);
        const DiffusionMatrix d = build_diffusion(b, s.params.kappa_b, b.n_b);
        CHECK(Mat6(d.diagonal().asDiagonal()) == d);
    }
    SUBCASE("closed form equals the tan(2 theta) form") {
        s.params.kappa_c = angular(3e6);
        s.params.temperature = 0.3;
        for (int j = 0; j < 20; ++j) {
            const double theta = (0.02 + 0.47 * j / 19.0) * pi;
            if (std::abs(theta - pi / 4) < 0.01) {
                continue;
            }
            const auto [g, wc] = solve_g_omega_c_from_theta(theta, s.params.omega_a, s.params.omega_b);
            s.params.g = g;
            s.params.omega_c = wc;
            const auto b = hybridize(s.params);
            const DiffusionMatrix d = build_diffusion(b, s.params.kappa_b, b.n_b);
            const double tan_form = 0.5 * std::tan(2 * b.theta) *
                                    (-b.kappa_plus * (2 * b.n_plus + 1) + b.kappa_minus * (2 * b.n_minus + 1));
            CHECK(d(0, 2) == doctest::Approx(tan_form).epsilon(1e-12));
            CHECK(d(1, 3) == d(0, 2));
            CHECK(d(2, 0) == d(0, 2));
            Eigen::SelfAdjointEigenSolver<Mat6> es(d);
            CHECK(es.eigenvalues().minCoeff() >= -1e-12 * d.norm());
        }
    }
    SUBCASE("finite at pi/4 and continuous") {
        s.params.kappa_c = angular(3e6);
        auto cross_at = [&](double theta) {
            const auto [g, wc] = solve_g_omega_c_from_theta(theta, s.params.omega_a, s.params.omega_b);
            s.params.g = g;
            s.params.omega_c = wc;
            const auto b = hybridize(s.params);
            return build_diffusion(b, s.params.kappa_b, b.n_b)(0, 2);
        };
        const double mid = cross_at(pi / 4);
        CHECK(std::isfinite(mid));
        CHECK(cross_at(pi / 4 + 1e-6) == doctest::Approx(mid).epsilon(1e-5));
        CHECK(cross_at(pi / 4 - 1e-6) == doctest::Approx(mid).epsilon(1e-5));
    }
    SUBCASE("vacuum consistency") {
        s.params.temperature = 0.0;
        const auto b = hybridize(s.params);
        const DiffusionMatrix d = build_diffusion(b, s.params.kappa_b, b.n_b);
        Vec6 expected;
        expected << b.kappa_plus, b.kappa_plus, b.kappa_minus, b.kappa_minus, s.params.kappa_b, s.params.kappa_b;
        CHECK((d.diagonal() - expected).norm() == 0.0);
        const DriftMatrix r = build_drift(b, EffectiveCouplings{}, s.params.omega_b, s.params.kappa_b);
        const Mat6 v = solve_lyapunov(r / s.params.omega_b, d / s.params.omega_b);
        CHECK((v - 0.5 * Mat6::Identity()).norm() < 1e-10);
    }
}

TEST_CASE("pipeline: no drive") {
    PipelineSpec s = paper_point(0.40 * pi);
    s.target_abs_g_minus.reset();
    s.params.drive_strength = 0.0;
    const auto r = run_pipeline(s);
    REQUIRE(r.state.stable);
    CHECK(*r.e_n_pp == 0.0);
    CHECK(*r.e_n_mb == 0.0);
    CHECK(*r.e_n_pb == 0.0);
    const auto& b = r.basis;
    Vec6 thermal;
    thermal << b.n_plus, b.n_plus, b.n_minus, b.n_minus, b.n_b, b.n_b;
    thermal.array() += 0.5;
    CHECK((r.state.covariance.diagonal() - thermal).norm() < 1e-9 * thermal.norm());
    Mat6 off = r.state.covariance;
    off.diagonal().setZero();
    CHECK(off.norm() < 1e-9);
}

TEST_CASE("pipeline: operating points") {
    const auto at40 = run_pipeline(paper_point(0.40 * pi));
    REQUIRE(at40.state.stable);
    CHECK(*at40.e_n_pp > 0.25);
    CHECK(units::ordinary(std::abs(at40.couplings.g_minus)) == doctest::Approx(2e6).epsilon(1e-10));
    CHECK(*at40.lyapunov_residual < kLyapunovResidualTol);
    CHECK(*at40.physicality >= -1e-8);

    const auto at30 = run_pipeline(paper_point(0.30 * pi));
    REQUIRE(at30.state.stable);
    CHECK(*at30.e_n_mb > *at30.e_n_pp);
    CHECK(*at40.e_n_pp > *at30.e_n_pp);

    const auto at20 = run_pipeline(paper_point(0.20 * pi));
    CHECK_FALSE(at20.state.stable);
    CHECK(at20.state.max_re_eig >= 0.0);
    CHECK_FALSE(at20.e_n_pp.has_value());
    CHECK_FALSE(at20.lyapunov_residual.has_value());
}

TEST_CASE("pipeline: the covariance matches the vectorized oracle at the optimum") {
    const PipelineSpec s = paper_point(0.40 * pi);
    const auto r = run_pipeline(s);
    const double scale = 1.0 / s.params.omega_b;
    const Mat6 drift = build_drift(r.basis, r.couplings, s.params.omega_b, s.params.kappa_b) * scale;
    const Mat6 diff = build_diffusion(r.basis, s.params.kappa_b, r.basis.n_b) * scale;
    const Mat6 ref = oracle::kronecker_lyapunov(drift, diff);
    CHECK((r.state.covariance - ref).norm() / ref.norm() < 1e-9);
}

TEST_CASE("pipeline: determinism") {
    const auto a = run_pipeline(paper_point(0.41 * pi));
    const auto b = run_pipeline(paper_point(0.41 * pi));
    CHECK(a.state.covariance == b.state.covariance);
    CHECK(*a.e_n_pp == *b.e_n_pp);
    CHECK(a.drive_strength == b.drive_strength);
}

TEST_CASE("pipeline: E_N is continuous in theta on the stable interval") {
    std::vector<double> e;
    const int n = 81;
    for (int j = 0; j < n; ++j) {
        const auto r = run_pipeline(paper_point((0.30 + 0.12 * j / (n - 1)) * pi));
        REQUIRE(r.state.stable);
        e.push_back(*r.e_n_pp);
    }
    for (int j = 2; j + 1 < n; ++j) {
        const double jump = std::abs(e[j] - e[j - 1]);
        const double slope = std::max(std::abs(e[j - 1] - e[j - 2]), std::abs(e[j + 1] - e[j]));
        CHECK(jump <= 10 * slope + 1e-12);
    }
}

TEST_CASE("pipeline: errors carry the stage") {
    PipelineSpec s = paper_point(0.40 * pi);
    s.params.kappa_b = -1.0;
    try {
        run_pipeline(s);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Parameter);
        CHECK(std::string(e.what()).rfind("hybridize: ", 0) == 0);
    }
}
