#pragma once

#include <stdexcept>
#include <string>

namespace capkit {

/// Precondition violation (bad argument, out-of-domain input).
class DomainError : public std::invalid_argument {
public:
    explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

/// A distribution family cannot be applied to the data at hand
/// (e.g. log-scale families on non-positive observations). Callers that
/// run several candidate families treat this as "skip", not failure.
class FamilyInapplicable : public std::runtime_error {
public:
    explicit FamilyInapplicable(const std::string& what) : std::runtime_error(what) {}
};

/// Iterative fit failed to converge; carries residual diagnostics.
class FitError : public std::runtime_error {
public:
    FitError(const std::string& what, double residual, int iterations)
        : std::runtime_error(what + " (residual=" + std::to_string(residual) +
                             ", iterations=" + std::to_string(iterations) + ")"),
          residual(residual),
          iterations(iterations) {}

    double residual;
    int iterations;
};

/// Input file / record problems; carries the offending line when known.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what, long line = -1)
        : std::runtime_error(line >= 0 ? what + " (line " + std::to_string(line) + ")" : what),
          line(line) {}

    long line;
};

}  // namespace capkit
