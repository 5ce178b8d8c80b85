// errors.hpp: exception hierarchy shared by every qmsdf module

#pragma once

#include <stdexcept>
#include <string>

namespace qmsdf {

// Invalid input: wrong shape, non-Hermitian where Hermitian is required,
// negative rates, non-unitary mixing matrices, ...
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A structural identity failed beyond tolerance. Carries the module that
// detected it and the offending residual.
class StructuralError : public std::runtime_error {
public:
    StructuralError(std::string module, const std::string& what, double residual)
        : std::runtime_error(module + ": " + what + " (residual " + std::to_string(residual) + ")"),
          module_(std::move(module)), residual_(residual) {}

    const std::string& module() const noexcept { return module_; }
    double residual() const noexcept { return residual_; }

private:
    std::string module_;
    double residual_;
};

// Numerical pathology: defective spectra, non-converging closures,
// failed random draws after the allowed number of retries.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, double residual = 0.0)
        : std::runtime_error(what), residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

// An operation was called without its mathematical precondition
// (for example a faithful invariant state) being satisfied.
class PreconditionError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace qmsdf
