#pragma once

#include <stdexcept>
#include <string>

namespace wickfield {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A computation would exceed its configured memory or operation budget.
class BudgetExceeded : public Error {
public:
    using Error::Error;
};

/// Coefficients that should be conjugate-symmetric are not.
class SymmetryViolation : public Error {
public:
    using Error::Error;
};

/// An iterative or quadrature procedure did not reach its tolerance.
class NumericFailure : public Error {
public:
    using Error::Error;
};

} // namespace wickfield
