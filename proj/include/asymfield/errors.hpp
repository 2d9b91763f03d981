#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace asymfield {

/// Malformed netlist text. Carries the 1-based source position.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, std::size_t line, std::size_t column)
        : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                             ": " + message),
          line_(line),
          column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// A circuit or parameter set that violates a model invariant.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Degenerate scattering problem: a resonance pole was hit (|sigma| = 1 or
/// |rho| = 1) or a closed-form denominator vanished.
class SingularError : public std::runtime_error {
public:
    SingularError(const std::string& message, double magnitude)
        : std::runtime_error(message), magnitude_(magnitude) {}

    /// Offending pivot or denominator magnitude.
    double magnitude() const noexcept { return magnitude_; }

private:
    double magnitude_;
};

}  // namespace asymfield
