#pragma once

// Reproducible parameter sweeps over the entanglement pipeline.
//
// Axis values are kept in display units (Hz for frequencies, mK for
// temperature, rad for angles, Hz^2 for the drive product); everything handed
// to the pipeline is converted to SI/angular units through parameter_to_si().

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "entangle/dynamics.hpp"

namespace entangle {

enum class Quantity { Frequency, Temperature, Angle, DriveProduct };

/// Known parameter keys, in config order.
const std::vector<std::string>& parameter_keys();
/// Throws Error(Parameter) for unknown keys.
Quantity parameter_quantity(std::string_view key);
double parameter_to_si(std::string_view key, double display_value);
double parameter_from_si(std::string_view key, double si_value);

/// A base operating point. Either `theta` is set (g and omega_c then follow
/// from a polariton splitting of 2 omega_b) or g/omega_c are used as given.
/// An unset omega_0 means the symmetric drive omega_0 = (omega_a + omega_c)/2.
/// An unset abs_g_minus means drive_strength is used as given.
struct Scenario {
    double omega_a = 0.0;
    double omega_b = 0.0;
    double kappa_a = 0.0;
    double kappa_c = 0.0;
    double kappa_b = 0.0;
    double temperature = 0.0;
    double g0 = kDefaultG0;
    std::optional<double> theta;
    double g = 0.0;
    double omega_c = 0.0;
    std::optional<double> omega_0;
    std::optional<double> abs_g_minus;
    double drive_strength = 0.0;

    /// omega_a/2pi = 10 GHz, omega_b/2pi = 10 MHz, kappa_a/2pi = kappa_c/2pi = 1 MHz,
    /// kappa_b/2pi = 100 Hz, T = 10 mK, |G-|/2pi = 2 MHz, theta = 0.40 pi.
    static Scenario paper_defaults();

    /// Sets one parameter by key (SI units). Setting g or omega_c switches a
    /// theta-defined scenario to explicit (g, omega_c), keeping the other one.
    void set(std::string_view key, double si_value);

    /// Concrete pipeline input.
    PipelineSpec resolve() const;
};

enum class SweepKind { Point, Theta, Detuning, GMinus, KappaGrid, TempKappaBGrid, Generic };
enum class AxisScale { Linear, Log };

std::string_view to_string(SweepKind kind) noexcept;
std::optional<SweepKind> sweep_kind_from_string(std::string_view name) noexcept;
std::string_view to_string(AxisScale scale) noexcept;

struct SweepKindInfo {
    SweepKind kind;
    std::string_view name;
    std::string_view description;
};
const std::vector<SweepKindInfo>& sweep_kinds();

struct Axis {
    std::string key;  ///< parameter key the axis drives (or "detuning")
    double start = 0.0;
    double stop = 0.0;
    int count = 2;
    AxisScale scale = AxisScale::Linear;

    bool operator==(const Axis&) const = default;

    /// Throws Error(Parameter) unless count >= 2, start < stop, and log axes
    /// have positive endpoints.
    void validate() const;
    /// Grid in display units; the endpoints are exact.
    std::vector<double> values() const;
};

struct SweepSpec {
    SweepKind kind = SweepKind::Point;
    Scenario base = Scenario::paper_defaults();
    std::optional<Axis> x;
    std::optional<Axis> y;  ///< 2-D kinds only
    std::string param;      ///< Generic only
};

/// Default axes used when a config names a kind but gives no range.
std::pair<std::optional<Axis>, std::optional<Axis>> default_axes(SweepKind kind, std::string_view param = {});

struct SweepRecord {
    std::vector<double> axis;  ///< display units, one per axis
    PipelineResult result;
};

struct SweepSummary {
    std::size_t stable_count = 0;
    // 1-D sweeps: maximum of E_N(A+, A-) over stable points.
    std::optional<double> argmax;
    std::optional<double> max_e_n;
    std::optional<double> refined_argmax;  ///< golden-section refinement between the argmax neighbours
    std::optional<double> refined_max_e_n;
    std::optional<double> first_unstable;  ///< smallest unstable axis value
    // kappa grid
    std::optional<double> entangled_fraction;
    // temperature / kappa_b grid
    std::optional<double> t_crit_mk;
    std::optional<double> kappa_b_crit_hz;
};

struct SweepResult {
    SweepSpec spec;
    std::vector<SweepRecord> records;  ///< axis order; y varies fastest on 2-D grids
    SweepSummary summary;
};

struct SweepOptions {
    unsigned workers = 1;
};

/// E_N below this counts as "no entanglement" for threshold extraction.
inline constexpr double kEntanglementThreshold = 1e-4;

/// Throws Error(Parameter) when the axes do not fit the sweep kind or the
/// base scenario (e.g. a detuning axis starting below g).
void validate_sweep_spec(const SweepSpec& spec);

/// Pipeline input for one grid point of `spec`.
PipelineSpec point_spec(const SweepSpec& spec, const std::vector<double>& axis_values);

/// Evaluates independent pipeline inputs, `workers` at a time. Output order
/// matches input order regardless of the worker count.
std::vector<PipelineResult> evaluate_all(const std::vector<PipelineSpec>& specs, unsigned workers);

SweepResult run_sweep(const SweepSpec& spec, const SweepOptions& options = {});

SweepResult sweep_theta(const Scenario& base, const Axis& theta_axis, const SweepOptions& options = {});
/// |Delta_pm| axis (Hz). g stays at the base value, omega_c moves, omega_0 = (omega_a + omega_c)/2.
SweepResult sweep_detuning(const Scenario& base, const Axis& detuning_axis, const SweepOptions& options = {});
SweepResult sweep_g_minus(const Scenario& base, const Axis& g_minus_axis, const SweepOptions& options = {});
SweepResult sweep_kappa_grid(const Scenario& base, const Axis& kappa_a_axis, const Axis& kappa_c_axis,
                             const SweepOptions& options = {});
SweepResult sweep_temp_kappa_b(const Scenario& base, const Axis& temperature_axis, const Axis& kappa_b_axis,
                               const SweepOptions& options = {});

/// Smallest axis value (display units) at which E_N(A+, A-) < kEntanglementThreshold
/// or the system is unstable, scanning `axis` from the base scenario and
/// bisecting the first crossing. Empty if the whole axis stays entangled.
std::optional<double> entanglement_threshold(const Scenario& base, const Axis& axis, unsigned workers = 1);

}  // namespace entangle
