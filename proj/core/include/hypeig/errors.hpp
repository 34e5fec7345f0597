#pragma once

#include <stdexcept>
#include <string>

namespace hypeig {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid arguments: bad dimensions, out-of-range parameters.
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// A point or set is not where the operation requires it to be.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Integrator or linear-solver failure.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// The requested eigenvalue is not below the discrete first eigenvalue.
class SpectralError : public NumericalError {
public:
    SpectralError(const std::string& what, double bound)
        : NumericalError(what), bound_(bound) {}

    double bound() const noexcept { return bound_; }

private:
    double bound_;
};

/// Memory or size limit exceeded.
class ResourceError : public Error {
public:
    using Error::Error;
};

/// A qualitative property that must hold (monotonicity, ordering, sandwich)
/// was violated by the computed data.
class InvariantViolation : public Error {
public:
    using Error::Error;
};

} // namespace hypeig
