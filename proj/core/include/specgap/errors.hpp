#pragma once
#include <stdexcept>
#include <string>

namespace specgap {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the documented domain of an operation.
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// A user-supplied function could not be evaluated, or failed a consistency check.
class DomainError : public Error {
public:
    using Error::Error;
};

/// An integrand against the radial measure does not decay.
class NonIntegrable : public Error {
public:
    using Error::Error;
};

/// A structural hypothesis of a bound (positivity, monotonicity) is violated.
class HypothesisFailed : public Error {
public:
    using Error::Error;
};

/// A test function has (numerically) zero variance.
class DegenerateFunction : public Error {
public:
    using Error::Error;
};

class DiscretizationError : public Error {
public:
    using Error::Error;
};

class ConvergenceError : public Error {
public:
    using Error::Error;
};

}  // namespace specgap
