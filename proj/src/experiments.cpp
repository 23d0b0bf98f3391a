#include "entangle/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "entangle/errors.hpp"

namespace entangle {
namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::Parameter, what); }

double si_per_display(Quantity q) {
    switch (q) {
        case Quantity::Frequency: return units::two_pi;
        case Quantity::Temperature: return 1e-3;
        case Quantity::Angle: return 1.0;
        case Quantity::DriveProduct: return units::two_pi * units::two_pi;
    }
    return 1.0;
}

double e_n_or(const PipelineResult& r, double fallback) {
    return r.state.stable && r.e_n_pp ? *r.e_n_pp : fallback;
}

bool entangled(const PipelineResult& r) { return r.state.stable && r.e_n_pp && *r.e_n_pp >= kEntanglementThreshold; }

double midpoint(double lo, double hi, AxisScale scale) {
    return scale == AxisScale::Log ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
}

std::vector<std::string> axis_keys(const SweepSpec& spec) {
    std::vector<std::string> keys;
    if (spec.x) {
        keys.push_back(spec.x->key);
    }
    if (spec.y) {
        keys.push_back(spec.y->key);
    }
    return keys;
}

void check_axis_key(const std::optional<Axis>& axis, const char* expected, SweepKind kind) {
    if (!axis) {
        bad(std::string(to_string(kind)) + " sweep needs an axis over " + expected);
    }
    if (axis->key != expected) {
        bad(std::string(to_string(kind)) + " sweep axis must be " + expected + ", got " + axis->key);
    }
    axis->validate();
}

}  // namespace

void validate_sweep_spec(const SweepSpec& spec) {
    switch (spec.kind) {
        case SweepKind::Point:
            if (spec.x || spec.y) {
                bad("point evaluation takes no axes");
            }
            break;
        case SweepKind::Theta:
            check_axis_key(spec.x, "theta", spec.kind);
            if (spec.x->start <= 0.0 || spec.x->stop >= units::pi / 2) {
                bad("theta axis must lie inside (0, pi/2)");
            }
            break;
        case SweepKind::Detuning: {
            check_axis_key(spec.x, "detuning", spec.kind);
            const double g = spec.base.resolve().params.g;
            if (parameter_to_si("detuning", spec.x->start) < g) {
                bad("detuning axis must start at or above g (|Delta| >= g under the symmetric drive)");
            }
            break;
        }
        case SweepKind::GMinus:
            check_axis_key(spec.x, "g_minus", spec.kind);
            if (spec.x->start < 0.0) {
                bad("g_minus axis must be non-negative");
            }
            break;
        case SweepKind::KappaGrid:
            check_axis_key(spec.x, "kappa_a", spec.kind);
            check_axis_key(spec.y, "kappa_c", spec.kind);
            break;
        case SweepKind::TempKappaBGrid:
            check_axis_key(spec.x, "T", spec.kind);
            check_axis_key(spec.y, "kappa_b", spec.kind);
            break;
        case SweepKind::Generic:
            if (!spec.x || spec.y) {
                bad("generic sweep takes exactly one axis");
            }
            if (spec.x->key != spec.param) {
                bad("generic sweep axis key must equal its param");
            }
            parameter_quantity(spec.param);
            spec.x->validate();
            break;
    }
}

namespace {

void summarize_1d(const SweepSpec& spec, const std::vector<SweepRecord>& records, SweepSummary& s) {
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i].result;
        if (!r.state.stable) {
            if (!s.first_unstable) {
                s.first_unstable = records[i].axis[0];
            }
            continue;
        }
        if (!best || *r.e_n_pp > *records[*best].result.e_n_pp) {
            best = i;
        }
    }
    if (!best) {
        return;
    }
    s.argmax = records[*best].axis[0];
    s.max_e_n = *records[*best].result.e_n_pp;

    const std::size_t i = *best;
    if (i == 0 || i + 1 >= records.size() || !records[i - 1].result.state.stable ||
        !records[i + 1].result.state.stable || *s.max_e_n <= 0.0) {
        return;
    }
    // Golden-section search on the bracket around the grid maximum.
    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = records[i - 1].axis[0];
    double hi = records[i + 1].axis[0];
    auto eval = [&](double x) {
        const auto res = evaluate_all({point_spec(spec, {x})}, 1);
        return e_n_or(res.front(), -1.0);
    };
    double x1 = hi - invphi * (hi - lo);
    double x2 = lo + invphi * (hi - lo);
    double f1 = eval(x1);
    double f2 = eval(x2);
    for (int it = 0; it < 100 && (hi - lo) > 1e-12 * std::max(std::abs(lo), std::abs(hi)); ++it) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + invphi * (hi - lo);
            f2 = eval(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - invphi * (hi - lo);
            f1 = eval(x1);
        }
    }
    const double x = 0.5 * (lo + hi);
    const double fx = eval(x);
    if (fx >= *s.max_e_n) {
        s.refined_argmax = x;
        s.refined_max_e_n = fx;
    } else {
        s.refined_argmax = s.argmax;
        s.refined_max_e_n = s.max_e_n;
    }
}

}  // namespace

// ---------------------------------------------------------------------------
// Parameters

const std::vector<std::string>& parameter_keys() {
    static const std::vector<std::string> keys{"omega_a", "omega_b", "omega_c", "g",     "theta",   "kappa_a", "kappa_c",
                                               "kappa_b", "T",       "g_minus", "drive", "g0",      "omega_0"};
    return keys;
}

Quantity parameter_quantity(std::string_view key) {
    if (key == "theta") {
        return Quantity::Angle;
    }
    if (key == "T") {
        return Quantity::Temperature;
    }
    if (key == "drive") {
        return Quantity::DriveProduct;
    }
    if (key == "detuning") {
        return Quantity::Frequency;
    }
    const auto& keys = parameter_keys();
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
        bad("unknown parameter '" + std::string(key) + "'");
    }
    return Quantity::Frequency;
}

double parameter_to_si(std::string_view key, double display_value) {
    return display_value * si_per_display(parameter_quantity(key));
}

double parameter_from_si(std::string_view key, double si_value) {
    return si_value / si_per_display(parameter_quantity(key));
}

Scenario Scenario::paper_defaults() {
    Scenario s;
    s.omega_a = units::angular(10e9);
    s.omega_b = units::angular(10e6);
    s.kappa_a = units::angular(1e6);
    s.kappa_c = units::angular(1e6);
    s.kappa_b = units::angular(100.0);
    s.temperature = 10e-3;
    s.g0 = kDefaultG0;
    s.theta = 0.40 * units::pi;
    s.abs_g_minus = units::angular(2e6);
    return s;
}

void Scenario::set(std::string_view key, double v) {
    if (key == "omega_a") {
        omega_a = v;
    } else if (key == "omega_b") {
        omega_b = v;
    } else if (key == "omega_c" || key == "g") {
        if (theta) {
            const auto [gg, wc] = solve_g_omega_c_from_theta(*theta, omega_a, omega_b);
            g = gg;
            omega_c = wc;
            theta.reset();
        }
        (key == "g" ? g : omega_c) = v;
    } else if (key == "theta") {
        theta = v;
    } else if (key == "kappa_a") {
        kappa_a = v;
    } else if (key == "kappa_c") {
        kappa_c = v;
    } else if (key == "kappa_b") {
        kappa_b = v;
    } else if (key == "T") {
        temperature = v;
    } else if (key == "g_minus") {
        abs_g_minus = v;
    } else if (key == "drive") {
        drive_strength = v;
        abs_g_minus.reset();
    } else if (key == "g0") {
        g0 = v;
    } else if (key == "omega_0") {
        omega_0 = v;
    } else {
        bad("unknown parameter '" + std::string(key) + "'");
    }
}

PipelineSpec Scenario::resolve() const {
    PipelineSpec spec;
    SystemParams& p = spec.params;
    p.omega_a = omega_a;
    p.omega_b = omega_b;
    p.kappa_a = kappa_a;
    p.kappa_c = kappa_c;
    p.kappa_b = kappa_b;
    p.temperature = temperature;
    p.g0 = g0;
    if (theta) {
        const auto [gg, wc] = solve_g_omega_c_from_theta(*theta, omega_a, omega_b);
        p.g = gg;
        p.omega_c = wc;
    } else {
        p.g = g;
        p.omega_c = omega_c;
    }
    p.omega_0 = omega_0 ? *omega_0 : 0.5 * (p.omega_a + p.omega_c);
    p.drive_strength = drive_strength;
    spec.target_abs_g_minus = abs_g_minus;
    return spec;
}

// ---------------------------------------------------------------------------
// Kinds and axes

std::string_view to_string(SweepKind kind) noexcept {
    switch (kind) {
        case SweepKind::Point: return "point";
        case SweepKind::Theta: return "theta";
        case SweepKind::Detuning: return "detuning";
        case SweepKind::GMinus: return "g_minus";
        case SweepKind::KappaGrid: return "kappa_grid";
        case SweepKind::TempKappaBGrid: return "temp_kappa_b_grid";
        case SweepKind::Generic: return "generic";
    }
    return "point";
}

std::optional<SweepKind> sweep_kind_from_string(std::string_view name) noexcept {
    for (const auto& info : sweep_kinds()) {
        if (info.name == name) {
            return info.kind;
        }
    }
    return std::nullopt;
}

std::string_view to_string(AxisScale scale) noexcept { return scale == AxisScale::Log ? "log" : "linear"; }

const std::vector<SweepKindInfo>& sweep_kinds() {
    static const std::vector<SweepKindInfo> kinds{
        {SweepKind::Point, "point", "single evaluation at the base parameters"},
        {SweepKind::Theta, "theta", "E_N vs mixing angle; g, omega_c re-solved for Delta+ = -Delta- = omega_b"},
        {SweepKind::Detuning, "detuning",
         "E_N vs |Delta_pm| (Hz); g fixed, omega_c varied, omega_0 = (omega_a + omega_c)/2"},
        {SweepKind::GMinus, "g_minus", "E_N vs |G-| (Hz) at the base point"},
        {SweepKind::KappaGrid, "kappa_grid", "2-D E_N over kappa_a (x) and kappa_c (y), Hz"},
        {SweepKind::TempKappaBGrid, "temp_kappa_b_grid",
         "2-D E_N over T (x, mK) and kappa_b (y, Hz) with T_crit / kappa_b,crit extraction"},
        {SweepKind::Generic, "generic", "E_N vs any single parameter named by sweep.param"},
    };
    return kinds;
}

void Axis::validate() const {
    if (count < 2) {
        bad("axis '" + key + "': count must be >= 2");
    }
    if (!std::isfinite(start) || !std::isfinite(stop) || !(start < stop)) {
        bad("axis '" + key + "': need finite start < stop");
    }
    if (scale == AxisScale::Log && !(start > 0.0)) {
        bad("axis '" + key + "': log scale needs positive endpoints");
    }
}

std::vector<double> Axis::values() const {
    validate();
    std::vector<double> v(static_cast<std::size_t>(count));
    const double n = count - 1;
    if (scale == AxisScale::Linear) {
        const double step = (stop - start) / n;
        for (int i = 0; i < count; ++i) {
            v[static_cast<std::size_t>(i)] = start + step * i;
        }
    } else {
        const double lo = std::log10(start);
        const double step = (std::log10(stop) - lo) / n;
        for (int i = 0; i < count; ++i) {
            v[static_cast<std::size_t>(i)] = std::pow(10.0, lo + step * i);
        }
        v.front() = start;
    }
    v.back() = stop;
    return v;
}

std::pair<std::optional<Axis>, std::optional<Axis>> default_axes(SweepKind kind, std::string_view param) {
    switch (kind) {
        case SweepKind::Point: return {};
        case SweepKind::Theta: return {Axis{"theta", 0.01 * units::pi, 0.49 * units::pi, 200}, std::nullopt};
        case SweepKind::Detuning: return {Axis{"detuning", 6e6, 30e6, 200}, std::nullopt};
        case SweepKind::GMinus: return {Axis{"g_minus", 0.0, 6e6, 200}, std::nullopt};
        case SweepKind::KappaGrid:
            return {Axis{"kappa_a", 1e5, 1e7, 60, AxisScale::Log}, Axis{"kappa_c", 1e5, 1e7, 60, AxisScale::Log}};
        case SweepKind::TempKappaBGrid:
            return {Axis{"T", 10.0, 400.0, 60}, Axis{"kappa_b", 1e2, 1e8, 60, AxisScale::Log}};
        case SweepKind::Generic:
            return {Axis{std::string(param), 0.0, 0.0, 0}, std::nullopt};  // range must be given
    }
    return {};
}

// ---------------------------------------------------------------------------
// Evaluation

PipelineSpec point_spec(const SweepSpec& spec, const std::vector<double>& axis_values) {
    Scenario s = spec.base;
    const auto keys = axis_keys(spec);
    if (keys.size() != axis_values.size()) {
        bad("point_spec: axis value count does not match the sweep");
    }
    for (std::size_t k = 0; k < keys.size(); ++k) {
        const double si = parameter_to_si(keys[k], axis_values[k]);
        if (keys[k] == "detuning") {
            // Fixed g, symmetric drive: |Delta_pm| = sqrt((omega_a - omega_c)^2 + 4 g^2) / 2.
            const PipelineSpec base = spec.base.resolve();
            const double g = base.params.g;
            const double side = base.params.omega_c >= base.params.omega_a ? 1.0 : -1.0;
            const double offset = 2.0 * std::sqrt(std::max(0.0, si * si - g * g));
            s.theta.reset();
            s.g = g;
            s.omega_c = s.omega_a + side * offset;
            s.omega_0.reset();
        } else {
            s.set(keys[k], si);
        }
    }
    return s.resolve();
}

std::vector<PipelineResult> evaluate_all(const std::vector<PipelineSpec>& specs, unsigned workers) {
    std::vector<PipelineResult> out(specs.size());
    const unsigned n = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(specs.size())));
    if (n <= 1) {
        for (std::size_t i = 0; i < specs.size(); ++i) {
            out[i] = run_pipeline(specs[i]);
        }
        return out;
    }

    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    {
        std::vector<std::jthread> pool;
        pool.reserve(n);
        for (unsigned w = 0; w < n; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < specs.size() && !failed; i = next++) {
                    try {
                        out[i] = run_pipeline(specs[i]);
                    } catch (...) {
                        std::lock_guard lock(error_mutex);
                        if (!error) {
                            error = std::current_exception();
                        }
                        failed = true;
                    }
                }
            });
        }
    }
    if (error) {
        std::rethrow_exception(error);
    }
    return out;
}

SweepResult run_sweep(const SweepSpec& spec, const SweepOptions& options) {
    validate_sweep_spec(spec);

    std::vector<std::vector<double>> grid;
    if (!spec.x) {
        grid.emplace_back();
    } else if (!spec.y) {
        for (double x : spec.x->values()) {
            grid.push_back({x});
        }
    } else {
        const auto ys = spec.y->values();
        for (double x : spec.x->values()) {
            for (double y : ys) {
                grid.push_back({x, y});
            }
        }
    }

    std::vector<PipelineSpec> inputs;
    inputs.reserve(grid.size());
    for (const auto& point : grid) {
        inputs.push_back(point_spec(spec, point));
    }
    auto results = evaluate_all(inputs, options.workers);

    SweepResult out;
    out.spec = spec;
    out.records.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        out.records.push_back({std::move(grid[i]), std::move(results[i])});
    }

    SweepSummary& s = out.summary;
    for (const auto& r : out.records) {
        s.stable_count += r.result.state.stable ? 1 : 0;
    }
    if (spec.x && !spec.y) {
        summarize_1d(spec, out.records, s);
    }
    if (spec.kind == SweepKind::KappaGrid) {
        std::size_t entangled_points = 0;
        for (const auto& r : out.records) {
            entangled_points += (r.result.state.stable && *r.result.e_n_pp > 0.0) ? 1 : 0;
        }
        s.entangled_fraction = static_cast<double>(entangled_points) / static_cast<double>(out.records.size());
    }
    if (spec.kind == SweepKind::TempKappaBGrid) {
        s.t_crit_mk = entanglement_threshold(spec.base, *spec.x, options.workers);
        s.kappa_b_crit_hz = entanglement_threshold(spec.base, *spec.y, options.workers);
    }
    return out;
}

SweepResult sweep_theta(const Scenario& base, const Axis& theta_axis, const SweepOptions& options) {
    return run_sweep({SweepKind::Theta, base, theta_axis, std::nullopt, {}}, options);
}

SweepResult sweep_detuning(const Scenario& base, const Axis& detuning_axis, const SweepOptions& options) {
    return run_sweep({SweepKind::Detuning, base, detuning_axis, std::nullopt, {}}, options);
}

SweepResult sweep_g_minus(const Scenario& base, const Axis& g_minus_axis, const SweepOptions& options) {
    return run_sweep({SweepKind::GMinus, base, g_minus_axis, std::nullopt, {}}, options);
}

SweepResult sweep_kappa_grid(const Scenario& base, const Axis& kappa_a_axis, const Axis& kappa_c_axis,
                             const SweepOptions& options) {
    return run_sweep({SweepKind::KappaGrid, base, kappa_a_axis, kappa_c_axis, {}}, options);
}

SweepResult sweep_temp_kappa_b(const Scenario& base, const Axis& temperature_axis, const Axis& kappa_b_axis,
                               const SweepOptions& options) {
    return run_sweep({SweepKind::TempKappaBGrid, base, temperature_axis, kappa_b_axis, {}}, options);
}

std::optional<double> entanglement_threshold(const Scenario& base, const Axis& axis, unsigned workers) {
    const SweepSpec line{SweepKind::Generic, base, axis, std::nullopt, axis.key};
    const auto xs = axis.values();
    std::vector<PipelineSpec> inputs;
    inputs.reserve(xs.size());
    for (double x : xs) {
        inputs.push_back(point_spec(line, {x}));
    }
    const auto results = evaluate_all(inputs, workers);

    std::size_t first = results.size();
    for (std::size_t i = 0; i < results.size(); ++i) {
        if (!entangled(results[i])) {
            first = i;
            break;
        }
    }
    if (first == results.size()) {
        return std::nullopt;
    }
    if (first == 0) {
        return xs.front();
    }
    double lo = xs[first - 1];  // entangled
    double hi = xs[first];      // not entangled
    for (int it = 0; it < 200 && (hi - lo) > 1e-10 * hi; ++it) {
        const double mid = midpoint(lo, hi, axis.scale);
        if (entangled(run_pipeline(point_spec(line, {mid})))) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return hi;
}

}  // namespace entangle
