#pragma once

#include <stdexcept>
#include <string>

namespace cqroute {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A NetworkConfig (or other input value) violates its invariants.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Configuration text could not be parsed. `line()` is 1-based, 0 if unknown.
class ParseError : public Error {
public:
    ParseError(const std::string& message, int line)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
          line_(line) {}

    int line() const noexcept { return line_; }

private:
    int line_;
};

/// The qubit normalization N_alpha is numerically zero.
class DegenerateQubit : public Error {
public:
    using Error::Error;
};

/// The target receiver never reaches the population floor inside the horizon.
class NoTransferPeak : public Error {
public:
    NoTransferPeak(const std::string& message, double best_population)
        : Error(message), best_population_(best_population) {}

    double best_population() const noexcept { return best_population_; }

private:
    double best_population_;
};

/// A truncated Fock space would exceed the configured dimension limit.
class DimensionGuard : public Error {
public:
    using Error::Error;
};

/// Truncating a coherent superposition discards more weight than allowed.
class ExcessiveTruncation : public Error {
public:
    ExcessiveTruncation(const std::string& message, double weight)
        : Error(message), weight_(weight) {}

    double discarded_weight() const noexcept { return weight_; }

private:
    double weight_;
};

/// Time evolution failed to keep the norm within tolerance.
class EvolutionFailure : public Error {
public:
    EvolutionFailure(const std::string& message, double norm_defect)
        : Error(message), norm_defect_(norm_defect) {}

    double norm_defect() const noexcept { return norm_defect_; }

private:
    double norm_defect_;
};

/// The symmetric eigensolver did not converge (malformed matrix).
class EigenFailure : public Error {
public:
    using Error::Error;
};

}  // namespace cqroute
