#pragma once

#include <stdexcept>
#include <string>

namespace deit {

/// Invalid or inconsistent scenario / run configuration.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Function evaluated outside its domain (coincident atoms, broken closed form, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// The time-domain solver hit a non-finite amplitude.
class SolverAbort : public std::runtime_error {
public:
    SolverAbort(const std::string& what, long step, double t)
        : std::runtime_error(what), step_(step), t_(t) {}

    long step() const { return step_; }
    double time() const { return t_; }

private:
    long step_;
    double t_;
};

} // namespace deit
