#pragma once

#include <stdexcept>
#include <string>

namespace bclab {

// Argument outside the mathematical domain of an operation (beta <= 0, t not finite, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Caller asked for something the operation does not offer (unsupported derivative order, ...).
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Request exceeds a configured resource cap (exact enumeration above n_max).
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A sequence specification violates one of its validity conditions.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// The requested limit theorem does not apply to this sequence.
class UnsupportedError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Iterative numerics (root finding, quadrature) failed to reach the requested tolerance.
class NumericError : public std::runtime_error {
public:
    NumericError(const std::string& operation, double achieved)
        : std::runtime_error(operation + ": did not converge (achieved tolerance "
                             + std::to_string(achieved) + ")"),
          operation_(operation), achieved_(achieved) {}

    const std::string& operation() const noexcept { return operation_; }
    double achieved_tolerance() const noexcept { return achieved_; }

private:
    std::string operation_;
    double achieved_;
};

} // namespace bclab
