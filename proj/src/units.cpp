#include "entangle/units.hpp"
#include "entangle/errors.hpp"

#include <cmath>

namespace entangle {

const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::Parameter: return "parameter error";
        case ErrorKind::DegenerateHybridization: return "degenerate hybridization";
        case ErrorKind::SingularSteadyState: return "singular steady state";
        case ErrorKind::NoSolution: return "no solution";
        case ErrorKind::NoSteadyState: return "no steady state";
        case ErrorKind::Numerical: return "numerical error";
        case ErrorKind::InvalidState: return "invalid state";
        case ErrorKind::Config: return "config error";
        case ErrorKind::Io: return "i/o error";
    }
    return "error";
}

namespace units {

double thermal_occupation(double omega, double temperature) {
    if (!std::isfinite(omega) || !std::isfinite(temperature) || omega <= 0.0 || temperature < 0.0) {
        throw Error(ErrorKind::Parameter, "thermal_occupation: need omega > 0 and T >= 0");
    }
    if (temperature == 0.0) {
        return 0.0;
    }
    return 1.0 / std::expm1(hbar * omega / (k_boltzmann * temperature));
}

}  // namespace units
}  // namespace entangle
