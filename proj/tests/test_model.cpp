#include <doctest.h>

#include <cmath>
#include <random>

#include "entangle/errors.hpp"
#include "entangle/model.hpp"

using namespace entangle;
using units::angular;
using units::pi;

namespace {

SystemParams defaults_at(double theta) {
    SystemParams p;
    p.omega_a = angular(10e9);
    p.omega_b = angular(10e6);
    const auto [g, wc] = solve_g_omega_c_from_theta(theta, p.omega_a, p.omega_b);
    p.g = g;
    p.omega_c = wc;
    p.kappa_a = p.kappa_c = angular(1e6);
    p.kappa_b = angular(100);
    p.temperature = 0.010;
    p.omega_0 = 0.5 * (p.omega_a + p.omega_c);
    return p;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_CASE("thermal occupation against arbitrary-precision values") {
    // mpmath, 40 digits: 1/(exp(hbar w / kB T) - 1)
    CHECK(rel(units::thermal_occupation(angular(10e6), 0.010), 20.34061835180099681279) < 1e-12);
    CHECK(rel(units::thermal_occupation(angular(1e9), 0.5), 9.926307078548583596) < 1e-12);
    CHECK(rel(units::thermal_occupation(angular(10e9), 0.22), 0.12723688134520563930) < 1e-12);
    CHECK(units::thermal_occupation(angular(10e9), 0.0) == 0.0);
    CHECK_THROWS_AS(units::thermal_occupation(angular(10e9), -1.0), Error);
}

TEST_CASE("thermal occupation is increasing in T with the classical limit") {
    const double w = angular(10e6);
    double prev = 0.0;
    for (double t = 1e-4; t < 1.0; t *= 1.3) {
        const double n = units::thermal_occupation(w, t);
        CHECK(n > prev);
        prev = n;
    }
    const double crossover = units::hbar * w / units::k_boltzmann;
    // N = kT/hw - 1/2 + O(hw/kT): the half-quantum offset is 5% at 10x the
    // crossover, so N + 1/2 is compared there and N itself at 100x.
    for (double factor : {10.0, 100.0}) {
        const double t = factor * crossover;
        const double classical = units::k_boltzmann * t / (units::hbar * w);
        CHECK(rel(units::thermal_occupation(w, t) + 0.5, classical) < 0.01);
    }
    const double t = 100 * crossover;
    CHECK(rel(units::thermal_occupation(w, t), units::k_boltzmann * t / (units::hbar * w)) < 0.01);
}

TEST_CASE("hybridize: symmetric case") {
    SystemParams p = defaults_at(0.4 * pi);
    p.omega_c = p.omega_a;
    p.g = angular(3e6);
    const auto b = hybridize(p);
    CHECK(b.theta == pi / 4);
    CHECK(rel(b.omega_plus, p.omega_a + p.g) < 1e-15);
    CHECK(rel(b.omega_minus, p.omega_a - p.g) < 1e-15);
}

TEST_CASE("hybridize: quoted operating point") {
    SystemParams p = defaults_at(0.4 * pi);
    p.g = angular(5.88e6);
    p.omega_c = angular(10.0162e9);
    const auto b = hybridize(p);
    CHECK(b.theta / pi == doctest::Approx(0.40).epsilon(0.005));
    CHECK((b.omega_plus - b.omega_minus) / (2 * p.omega_b) == doctest::Approx(1.0).epsilon(0.005));
    CHECK(b.n_b == doctest::Approx(20.3).epsilon(0.005));
}

TEST_CASE("hybridize: branch for omega_a < omega_c") {
    SystemParams p = defaults_at(0.4 * pi);
    CHECK(p.omega_c > p.omega_a);
    const auto b = hybridize(p);
    CHECK(b.theta > pi / 4);
    CHECK(b.theta < pi / 2);
}

TEST_CASE("basis invariants") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 50; ++k) {
        SystemParams p;
        p.omega_a = angular(1e9 + 9e9 * u(rng));
        p.omega_c = p.omega_a + angular(-50e6 + 100e6 * u(rng));
        p.omega_b = angular(1e6 + 20e6 * u(rng));
        p.g = angular(20e6 * u(rng));
        p.kappa_a = angular(1e5 + 1e6 * u(rng));
        p.kappa_c = angular(1e5 + 1e6 * u(rng));
        p.kappa_b = angular(100);
        p.temperature = 0.5 * u(rng);
        p.omega_0 = p.omega_a;
        const auto b = hybridize(p);

        CHECK(rel(b.kappa_plus + b.kappa_minus, p.kappa_a + p.kappa_c) < 1e-14);
        CHECK(rel(b.omega_plus + b.omega_minus, p.omega_a + p.omega_c) < 1e-12);
        CHECK(b.omega_plus - b.omega_minus >= 2 * p.g * (1 - 1e-12));
        const double lhs = (2 * b.n_plus + 1) * b.kappa_plus + (2 * b.n_minus + 1) * b.kappa_minus;
        const double rhs = (2 * b.n_a + 1) * p.kappa_a + (2 * b.n_c + 1) * p.kappa_c;
        CHECK(rel(lhs, rhs) < 1e-12);

        p.kappa_c = p.kappa_a;
        CHECK(hybridize(p).delta_kappa == 0.0);
    }
}

TEST_CASE("theta = 0 is exact") {
    SystemParams p = defaults_at(0.4 * pi);
    p.g = 0.0;
    p.omega_c = p.omega_a - angular(20e6);
    p.kappa_c = angular(3e6);
    p.temperature = 0.5;
    const auto b = hybridize(p);
    CHECK(b.theta == 0.0);
    CHECK(b.kappa_plus == p.kappa_a);
    CHECK(b.n_plus == b.n_a);
    CHECK(b.delta_kappa == 0.0);
}

TEST_CASE("shift invariance of the drive-frame quantities") {
    SystemParams p = defaults_at(0.37 * pi);
    p.kappa_c = angular(2.5e6);
    SystemParams q = p;
    const double s = angular(137e6);
    q.omega_a += s;
    q.omega_c += s;
    q.omega_0 += s;
    const auto b1 = hybridize(p);
    const auto b2 = hybridize(q);
    CHECK(b2.theta == doctest::Approx(b1.theta).epsilon(1e-9));
    CHECK(b2.delta_plus == doctest::Approx(b1.delta_plus).epsilon(1e-6));
    CHECK(b2.delta_minus == doctest::Approx(b1.delta_minus).epsilon(1e-6));
    CHECK(b2.kappa_plus == doctest::Approx(b1.kappa_plus).epsilon(1e-9));
    CHECK(b2.delta_kappa == doctest::Approx(b1.delta_kappa).epsilon(1e-9));
    const auto c1 = couplings_for_drive(b1, 1e13, kDefaultG0);
    const auto c2 = couplings_for_drive(b2, 1e13, kDefaultG0);
    CHECK(std::abs(c2.g_minus - c1.g_minus) < 1e-6 * std::abs(c1.g_minus));
    CHECK(std::abs(c2.g_plus - c1.g_plus) < 1e-6 * std::abs(c1.g_plus));
}

TEST_CASE("inverse problem") {
    const double wa = angular(10e9);
    const double wb = angular(10e6);
    SUBCASE("quoted values") {
        const auto [g, wc] = solve_g_omega_c_from_theta(0.40 * pi, wa, wb);
        CHECK(units::ordinary(g) == doctest::Approx(5.878e6).epsilon(1e-4));
        CHECK(units::ordinary(wc) == doctest::Approx(10.01618e9).epsilon(1e-7));
    }
    SUBCASE("pi/4") {
        const auto [g, wc] = solve_g_omega_c_from_theta(pi / 4, wa, wb);
        CHECK(g == doctest::Approx(wb).epsilon(1e-15));
        CHECK(std::abs(wc - wa) < 1e-6);
    }
    SUBCASE("round trip") {
        for (double t : {0.05, 0.2, 0.3, 0.4, 0.45, 0.49}) {
            SystemParams p = defaults_at(t * pi);
            const auto b = hybridize(p);
            CHECK(std::abs(b.theta - t * pi) < 1e-12);
            CHECK(rel(b.omega_plus - b.omega_minus, 2 * wb) < 1e-9);
            CHECK(rel(b.delta_plus, wb) < 1e-6);
            CHECK(rel(b.delta_minus, -wb) < 1e-6);
        }
    }
    SUBCASE("degenerate angles") {
        for (double t : {0.0, pi / 2, -0.1, 2.0}) {
            try {
                solve_g_omega_c_from_theta(t, wa, wb);
                FAIL("expected an error");
            } catch (const Error& e) {
                CHECK(e.kind() == ErrorKind::DegenerateHybridization);
            }
        }
    }
}

TEST_CASE("steady-state amplitudes") {
    SystemParams p = defaults_at(0.4 * pi);
    const auto b = hybridize(p);

    SUBCASE("no drive") {
        const auto c = steady_state_amplitudes(b, 0.0, kDefaultG0);
        CHECK(c.amp_plus == cdouble(0.0));
        CHECK(c.amp_minus == cdouble(0.0));
        CHECK(c.g_plus == cdouble(0.0));
        CHECK(c.g_minus_b == cdouble(0.0));
        CHECK(c.re_b == 0.0);
    }
    SUBCASE("balanced dissipation closed form") {
        REQUIRE(b.delta_kappa == 0.0);
        const double omega = 3.3e9;
        const auto c = steady_state_amplitudes(b, omega, kDefaultG0);
        const cdouble i(0, 1);
        const cdouble ap = -i * omega * std::sin(b.theta) / cdouble(b.delta_plus, -b.kappa_plus);
        const cdouble am = -i * omega * std::cos(b.theta) / cdouble(b.delta_minus, -b.kappa_minus);
        CHECK(std::abs(c.amp_plus - ap) < 1e-12 * std::abs(ap));
        CHECK(std::abs(c.amp_minus - am) < 1e-12 * std::abs(am));
    }
    SUBCASE("coupling ratio follows tan theta") {
        const auto c = couplings_for_drive(b, 1e13, kDefaultG0);
        CHECK(std::abs(c.g_plus / c.g_minus) == doctest::Approx(std::tan(0.4 * pi)).epsilon(0.01));
    }
    SUBCASE("coupling definitions") {
        SystemParams q = p;
        q.kappa_c = angular(4e6);
        const auto bq = hybridize(q);
        const double omega = 1e9;
        const auto c = steady_state_amplitudes(bq, omega, kDefaultG0);
        const double s = std::sin(bq.theta);
        const double co = std::cos(bq.theta);
        const cdouble i(0, 1);
        CHECK(std::abs(c.g_plus - 2.0 * i * kDefaultG0 * c.amp_plus) == 0.0);
        CHECK(std::abs(c.g_pm - (c.g_plus * s + c.g_minus * co)) < 1e-15 * std::abs(c.g_pm));
        CHECK(std::norm(c.g_plus_b) + std::norm(c.g_minus_b) == doctest::Approx(std::norm(c.g_pm)).epsilon(1e-13));
        const double re_b = -(kDefaultG0 / q.omega_b) * std::norm(c.amp_plus * s + c.amp_minus * co);
        CHECK(c.re_b == doctest::Approx(re_b).epsilon(1e-14));
    }
    SUBCASE("singular denominator") {
        PolaritonBasis z = b;
        z.delta_plus = 0.0;
        z.kappa_plus = 0.0;
        CHECK_THROWS_AS(steady_state_amplitudes(z, 1.0, kDefaultG0), Error);
    }
}

TEST_CASE("drive inversion") {
    const auto b = hybridize(defaults_at(0.4 * pi));
    CHECK(drive_for_target_g_minus(b, 0.0) == 0.0);
    const double d1 = drive_for_target_g_minus(b, angular(1e6));
    const double d2 = drive_for_target_g_minus(b, angular(2e6));
    CHECK(d2 == doctest::Approx(2 * d1).epsilon(1e-15));
    const auto c = couplings_for_drive(b, d2, kDefaultG0);
    CHECK(units::ordinary(std::abs(c.g_minus)) == doctest::Approx(2e6).epsilon(1e-10));
    CHECK_THROWS_AS(drive_for_target_g_minus(b, -1.0), Error);
}

TEST_CASE("parameter validation") {
    SystemParams p = defaults_at(0.4 * pi);
    auto expect_parameter_error = [](SystemParams q) {
        try {
            hybridize(q);
            FAIL("expected an error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::Parameter);
        }
    };
    SystemParams q = p;
    q.kappa_a = -1;
    expect_parameter_error(q);
    q = p;
    q.omega_b = std::nan("");
    expect_parameter_error(q);
    q = p;
    q.temperature = -0.1;
    expect_parameter_error(q);
    q = p;
    q.omega_b = q.omega_a / 5;
    CHECK(q.outside_dispersive_regime());
    CHECK_NOTHROW(hybridize(q));
    CHECK_FALSE(p.outside_dispersive_regime());
}
