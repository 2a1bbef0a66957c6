#pragma once

#include <stdexcept>
#include <string>

namespace gamband {

/// Invalid configuration or malformed input (bad dimensions, out-of-range scalars).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An instance does not admit a rho-GAM certificate: either a maximizer
/// disagrees with the proxy beyond tolerance, or the minimal ratio is >= 1.
class NotGamError : public std::runtime_error {
public:
    NotGamError(int action_index, double violation, const std::string& msg)
        : std::runtime_error(msg), action_index(action_index), violation(violation) {}
    int action_index;
    double violation;
};

/// Same as NotGamError, for the shift-invariant (weak) condition.
class NotWeakGamError : public std::runtime_error {
public:
    NotWeakGamError(int action_index, double violation, const std::string& msg)
        : std::runtime_error(msg), action_index(action_index), violation(violation) {}
    int action_index;
    double violation;
};

/// Quadratic form against a pseudo-inverse was requested for a vector with a
/// component outside the column span.
class NotInSpanError : public std::runtime_error {
public:
    explicit NotInSpanError(double residual, const std::string& msg)
        : std::runtime_error(msg), residual(residual) {}
    double residual;
};

/// Frank-Wolfe failed to certify g(pi) within the iteration budget.
class DesignFailureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace gamband
