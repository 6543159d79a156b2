#pragma once

#include <stdexcept>
#include <string>

namespace ntstsm {

/// Jacobian is rank-deficient beyond what the damped pseudo-inverse can absorb.
class SingularityError : public std::runtime_error {
public:
    explicit SingularityError(const std::string& what) : std::runtime_error(what) {}
};

/// Forward-dynamics step produced a non-finite state.
class IntegrationError : public std::runtime_error {
public:
    explicit IntegrationError(const std::string& what) : std::runtime_error(what) {}
};

/// Observer state became non-finite.
class ObserverDiverged : public std::runtime_error {
public:
    explicit ObserverDiverged(const std::string& what) : std::runtime_error(what) {}
};

/// |eta_tilde| fell below the floor that keeps H invertible.
class OrientationErrorTooLarge : public std::runtime_error {
public:
    explicit OrientationErrorTooLarge(const std::string& what) : std::runtime_error(what) {}
};

/// gamma * theta <= 1: the stability ellipse has no interior.
class DegenerateEllipse : public std::domain_error {
public:
    explicit DegenerateEllipse(const std::string& what) : std::domain_error(what) {}
};

/// Query lies outside the stability ellipse; convergence rates are undefined.
class NotStable : public std::domain_error {
public:
    explicit NotStable(const std::string& what) : std::domain_error(what) {}
};

/// Metric requested on a log with no ticks (or too few for the formula).
class EmptyLog : public std::invalid_argument {
public:
    explicit EmptyLog(const std::string& what) : std::invalid_argument(what) {}
};

/// Malformed or inconsistent configuration input.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ntstsm
