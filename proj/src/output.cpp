#include "entangle/output.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <ostream>

#include "entangle/errors.hpp"

namespace entangle {
namespace {

constexpr std::array<const char*, 10> kFixedColumns{"e_n_pp",     "e_n_mb",      "e_n_pb",     "stable",
                                                    "max_re_eig", "abs_g_plus",  "abs_g_minus", "theta",
                                                    "delta_plus", "delta_minus"};

std::string optional_cell(const std::optional<double>& v, int digits) {
    return v ? format_double(*v, digits) : std::string();
}

double abscissa(const SweepSpec& spec, double x) {
    return spec.kind == SweepKind::Theta ? x / units::pi : x;
}

double pair_value(const PipelineResult& r, int pair) {
    if (!r.state.stable) {
        return std::nan("");
    }
    const std::optional<double>& v = pair == 0 ? r.e_n_pp : pair == 1 ? r.e_n_mb : r.e_n_pb;
    return v.value_or(std::nan(""));
}

constexpr std::array<const char*, 3> kPairNames{"e_n_pp", "e_n_mb", "e_n_pb"};

}  // namespace

std::string format_double(double value, int significant_digits) {
    if (std::isnan(value)) {
        return "NaN";
    }
    std::array<char, 64> buf{};
    const auto res = significant_digits > 0
                         ? std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::general,
                                         significant_digits)
                         : std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (res.ec != std::errc()) {
        throw Error(ErrorKind::Numerical, "format_double: conversion failed");
    }
    return std::string(buf.data(), res.ptr);
}

std::vector<std::string> records_header(const SweepSpec& spec) {
    std::vector<std::string> cols;
    if (spec.x) {
        cols.push_back("axis_" + spec.x->key);
    }
    if (spec.y) {
        cols.push_back("axis_" + spec.y->key);
    }
    cols.insert(cols.end(), kFixedColumns.begin(), kFixedColumns.end());
    return cols;
}

void write_records(std::ostream& os, const SweepResult& result, int digits) {
    const auto header = records_header(result.spec);
    for (std::size_t i = 0; i < header.size(); ++i) {
        os << (i ? "," : "") << header[i];
    }
    os << '\n';

    for (const auto& rec : result.records) {
        const PipelineResult& r = rec.result;
        for (double a : rec.axis) {
            os << format_double(a, digits) << ',';
        }
        os << optional_cell(r.e_n_pp, digits) << ',' << optional_cell(r.e_n_mb, digits) << ','
           << optional_cell(r.e_n_pb, digits) << ',' << (r.state.stable ? 1 : 0) << ','
           << format_double(units::ordinary(r.state.max_re_eig), digits) << ','
           << format_double(units::ordinary(std::abs(r.couplings.g_plus)), digits) << ','
           << format_double(units::ordinary(std::abs(r.couplings.g_minus)), digits) << ','
           << format_double(r.basis.theta, digits) << ',' << format_double(units::ordinary(r.basis.delta_plus), digits)
           << ',' << format_double(units::ordinary(r.basis.delta_minus), digits) << '\n';
    }
}

std::vector<std::string> summary_lines(const SweepResult& result) {
    const SweepSummary& s = result.summary;
    std::vector<std::string> lines;
    auto add = [&](const std::string& key, const std::optional<double>& v) {
        if (v) {
            lines.push_back("# " + key + " = " + format_double(*v));
        }
    };
    lines.push_back("# points = " + std::to_string(result.records.size()));
    lines.push_back("# stable_points = " + std::to_string(s.stable_count));
    const std::string axis = result.spec.x ? result.spec.x->key : "";
    add("argmax_" + axis, s.argmax);
    if (result.spec.kind == SweepKind::Theta && s.argmax) {
        add("argmax_theta_over_pi", *s.argmax / units::pi);
    }
    add("max_e_n_pp", s.max_e_n);
    add("refined_argmax_" + axis, s.refined_argmax);
    if (result.spec.kind == SweepKind::Theta && s.refined_argmax) {
        add("refined_argmax_theta_over_pi", *s.refined_argmax / units::pi);
        const auto geometry = result.spec.base;
        const auto [g, wc] = solve_g_omega_c_from_theta(*s.refined_argmax, geometry.omega_a, geometry.omega_b);
        add("refined_argmax_g_hz", units::ordinary(g));
        add("refined_argmax_omega_c_hz", units::ordinary(wc));
    }
    add("refined_max_e_n_pp", s.refined_max_e_n);
    add("first_unstable_" + axis, s.first_unstable);
    add("entangled_fraction", s.entangled_fraction);
    if (result.spec.kind == SweepKind::TempKappaBGrid) {
        lines.push_back("# threshold = E_N(A+,A-) < " + format_double(kEntanglementThreshold));
        lines.push_back(s.t_crit_mk ? "# t_crit_mk = " + format_double(*s.t_crit_mk)
                                    : "# t_crit_mk = none (entangled over the whole T axis)");
        lines.push_back(s.kappa_b_crit_hz ? "# kappa_b_crit_hz = " + format_double(*s.kappa_b_crit_hz)
                                          : "# kappa_b_crit_hz = none (entangled over the whole kappa_b axis)");
    }
    if (result.spec.kind == SweepKind::Detuning) {
        lines.push_back("# detuning rule: g fixed at the base value, omega_c varied, omega_0 = (omega_a + omega_c)/2");
    }
    return lines;
}

void write_plot_data(std::ostream& os, const SweepResult& result, int digits) {
    const SweepSpec& spec = result.spec;
    os << "# entangle plot data: " << to_string(spec.kind) << " sweep; unstable points are NaN\n";
    if (!spec.x) {
        for (std::size_t p = 0; p < kPairNames.size(); ++p) {
            os << (p ? "\n\n" : "") << "# index " << p << ": " << kPairNames[p] << '\n';
            os << format_double(pair_value(result.records.front().result, static_cast<int>(p)), digits) << '\n';
        }
        return;
    }
    const std::string xlabel = spec.kind == SweepKind::Theta ? "theta/pi" : spec.x->key;

    if (!spec.y) {
        for (std::size_t p = 0; p < kPairNames.size(); ++p) {
            os << (p ? "\n\n" : "") << "# index " << p << ": " << kPairNames[p] << " vs " << xlabel << '\n';
            for (const auto& rec : result.records) {
                os << format_double(abscissa(spec, rec.axis[0]), digits) << ' '
                   << format_double(pair_value(rec.result, static_cast<int>(p)), digits) << '\n';
            }
        }
        return;
    }

    const auto xs = spec.x->values();
    const auto ys = spec.y->values();
    for (std::size_t p = 0; p < kPairNames.size(); ++p) {
        os << (p ? "\n\n" : "") << "# index " << p << ": " << kPairNames[p] << " (nonuniform matrix; x = " << spec.x->key
           << ", y = " << spec.y->key << ")\n";
        os << xs.size();
        for (double x : xs) {
            os << ' ' << format_double(x, digits);
        }
        os << '\n';
        for (std::size_t j = 0; j < ys.size(); ++j) {
            os << format_double(ys[j], digits);
            for (std::size_t i = 0; i < xs.size(); ++i) {
                // records are x-major with y fastest
                os << ' ' << format_double(pair_value(result.records[i * ys.size() + j].result, static_cast<int>(p)), digits);
            }
            os << '\n';
        }
    }
}

}  // namespace entangle
