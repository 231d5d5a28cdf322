#pragma once

#include <stdexcept>
#include <string>

namespace ppvl {

/// Violated precondition or parameter invariant.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A numerical procedure failed to deliver a result (non-convergence,
/// step-size underflow, blowup).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IntegrationError : public NumericalError {
public:
    IntegrationError(const std::string& what, double tau)
        : NumericalError(what + " at tau=" + std::to_string(tau)), tau_(tau) {}

    double tau() const noexcept { return tau_; }

private:
    double tau_;
};

} // namespace ppvl
