#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "entangle/experiments.hpp"

namespace entangle {

/// Shortest round-trip decimal when `significant_digits` == 0, otherwise
/// general format with that many significant digits.
std::string format_double(double value, int significant_digits = 0);

/// Column names of the records file: axis_<key>... followed by the fixed
/// diagnostic columns.
std::vector<std::string> records_header(const SweepSpec& spec);

/// Comma-separated records, one row per grid point. Frequencies are ordinary
/// (Hz), theta in rad; E_N cells are empty for unstable points.
void write_records(std::ostream& os, const SweepResult& result, int significant_digits = 0);

/// Summary lines ("# key = value") for the metadata file.
std::vector<std::string> summary_lines(const SweepResult& result);

/// gnuplot-ready blocks, one per pair (e_n_pp, e_n_mb, e_n_pb), separated by
/// two blank lines. 1-D: two columns, theta sweeps use theta/pi on the
/// abscissa. 2-D: nonuniform-matrix blocks with the x axis on the first row
/// and y in the first column. Unstable points are written as NaN.
void write_plot_data(std::ostream& os, const SweepResult& result, int significant_digits = 0);

}  // namespace entangle
