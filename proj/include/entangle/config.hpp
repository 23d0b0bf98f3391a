#pragma once

// Run configuration: a small sectioned key = value format.
//
//   # comment
//   [params]
//   omega_a = 10GHz        # ordinary frequency; Hz with m/k/M/G prefixes
//   T = 10mK               # mK (bare numbers are mK)
//   theta = 0.40pi         # rad; "pi" multiples accepted
//   [sweep]
//   kind = theta
//   count = 200
//   [output]
//   dir = "out"
//   formats = ["csv", "meta", "dat"]
//
// Unknown sections/keys, unit mismatches, malformed numbers and out-of-range
// values raise ConfigError carrying the offending line.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "entangle/experiments.hpp"

namespace entangle {

/// Physical parameters in display units (Hz, mK, rad, Hz^2).
struct ParamBlock {
    double omega_a = 10e9;
    double omega_b = 10e6;
    // Geometry: theta, or the explicit pair (g, omega_c).
    std::optional<double> theta = 0.40 * units::pi;
    std::optional<double> g;
    std::optional<double> omega_c;
    double kappa_a = 1e6;
    double kappa_c = 1e6;
    double kappa_b = 100.0;
    double temperature_mk = 10.0;
    // Drive: pinned |G-|, or the product G0 * Omega.
    std::optional<double> g_minus = 2e6;
    std::optional<double> drive;
    double g0 = 1e-3;
    std::optional<double> omega_0;

    bool operator==(const ParamBlock&) const = default;

    Scenario to_scenario() const;
};

struct SweepBlock {
    SweepKind kind = SweepKind::Point;
    std::string param;  ///< generic sweeps only
    std::optional<Axis> x;
    std::optional<Axis> y;

    bool operator==(const SweepBlock&) const = default;
};

struct OutputBlock {
    std::string dir = ".";
    std::vector<std::string> formats{"csv", "meta", "dat"};
    int precision = 0;  ///< significant digits; 0 = shortest round-trip
    std::string name;   ///< file stem; defaults to the sweep kind

    bool operator==(const OutputBlock&) const = default;
};

struct RunConfig {
    ParamBlock params;
    SweepBlock sweep;
    OutputBlock output;

    bool operator==(const RunConfig&) const = default;

    SweepSpec to_sweep_spec() const;
};

/// Parses config text and applies `overrides` ("key=value" or
/// "section.key=value"; later entries win, overrides win over the file).
/// Missing keys take the defaults above.
RunConfig parse_config(std::string_view text, const std::vector<std::string>& overrides = {});

/// Canonical text for a resolved config; parse_config(echo_config(c)) == c.
std::string echo_config(const RunConfig& config);

/// Parses "<number>[unit]" for the given quantity into display units.
/// `line` only decorates errors.
double parse_quantity(std::string_view text, Quantity quantity, int line = 0);

}  // namespace entangle
