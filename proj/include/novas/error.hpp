#pragma once

#include <stdexcept>
#include <string>

namespace novas {

/// Base for every failure raised by the library. `category()` is a short
/// machine-readable tag the CLI prints in front of the message.
class Error : public std::runtime_error {
public:
    Error(std::string category, const std::string& message)
        : std::runtime_error(message), category_(std::move(category)) {}

    const std::string& category() const noexcept { return category_; }

private:
    std::string category_;
};

class InvalidInput : public Error {
public:
    explicit InvalidInput(const std::string& message) : Error("invalid-input", message) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& message) : Error("io", message) {}
};

class DegenerateInput : public Error {
public:
    explicit DegenerateInput(const std::string& message) : Error("degenerate-input", message) {}
};

/// Which admissibility condition a weight construction broke.
enum class Infeasibility {
    NegativeA0,     // solved a0 < 0 (lag mass exceeds 1 - alpha)
    TrimBound,      // effective a0 > 1/9, trimming bound below 3
    Dominance,      // GA: a0/(1-b1) smaller than the leading lag
    ShapeDomain,    // parameter outside its domain
};

const char* to_string(Infeasibility kind) noexcept;

class InfeasibleWeights : public Error {
public:
    InfeasibleWeights(Infeasibility kind, const std::string& message)
        : Error("infeasible-weights", message), kind_(kind) {}

    Infeasibility kind() const noexcept { return kind_; }

private:
    Infeasibility kind_;
};

/// Raised by the inverse transform when an innovation sits on (or past) the
/// trimming bound. Innovations must be pre-trimmed, so this indicates a bug
/// in the sampler feeding the inverse.
class TrimBoundViolation : public Error {
public:
    explicit TrimBoundViolation(const std::string& message) : Error("trim-bound", message) {}
};

class CalibrationFailure : public Error {
public:
    explicit CalibrationFailure(const std::string& message) : Error("calibration", message) {}
};

class ConvergenceFailure : public Error {
public:
    explicit ConvergenceFailure(const std::string& message) : Error("convergence", message) {}
};

}  // namespace novas
