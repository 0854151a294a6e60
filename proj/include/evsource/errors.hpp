#pragma once

#include <stdexcept>
#include <string>

namespace evsource {

/// Base class for all evsource numerical and contract errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on an argument's mathematical domain was violated.
class DomainError : public Error {
public:
    using Error::Error;
};

/// An argument was NaN/Inf where a finite value is required.
class InvalidInputError : public Error {
public:
    using Error::Error;
};

/// Evaluation would require exp() of a real part beyond double range.
class OverflowRegionError : public Error {
public:
    using Error::Error;
};

/// An iterative or adaptive scheme failed to reach its tolerance budget.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// The right boundary of a grid run became active during the evolution.
class QuiescenceViolatedError : public Error {
public:
    using Error::Error;
};

/// The integration path passes too close to a pole; nudge t and retry.
class PoleProximityError : public Error {
public:
    using Error::Error;
};

/// Arguments fall outside the validity window of a series expansion.
class RangeError : public Error {
public:
    using Error::Error;
};

/// The requested oscillation minimum does not exist for these arguments.
class NoMinimumError : public Error {
public:
    using Error::Error;
};

/// A quantity defined through an R = 1 crossing is undefined here.
class NoCrossingError : public Error {
public:
    using Error::Error;
};

} // namespace evsource
