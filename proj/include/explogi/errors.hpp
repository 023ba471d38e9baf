#pragma once

#include <stdexcept>
#include <string>

namespace explogi {

/// Unreadable or malformed input (bad CSV, missing columns, invariant
/// violations in user-supplied files). Mapped to exit code 2 by the CLI.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure: an algorithm could not produce a trustworthy result
/// within its budget. Mapped to exit code 3 by the CLI.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// The adaptive integrator exhausted its subdivision budget before reaching
/// the requested tolerance. Never returns a partial estimate.
class QuadratureNonConvergence : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// The normalizing constant underflowed to zero; the parameter point is
/// numerically unevaluable (reported fraction indistinguishable from 0).
class NormalizerUnderflow : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace explogi
