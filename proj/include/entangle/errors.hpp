#pragma once

#include <stdexcept>
#include <string>

namespace entangle {

enum class ErrorKind {
    Parameter,
    DegenerateHybridization,
    SingularSteadyState,
    NoSolution,
    NoSteadyState,
    Numerical,
    InvalidState,
    Config,
    Io,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

// Raised by the configuration reader; line() is 1-based, 0 when the problem
// is not tied to a line (e.g. a bad --set override or a cross-key conflict).
class ConfigError : public Error {
public:
    ConfigError(int line, const std::string& what)
        : Error(ErrorKind::Config, line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}

    int line() const noexcept { return line_; }

private:
    int line_;
};

}  // namespace entangle
