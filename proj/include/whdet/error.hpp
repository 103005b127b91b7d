#pragma once

#include <stdexcept>
#include <string>

namespace whdet {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Argument falls on a pole (Gamma, digamma) or on a degenerate parameter.
class PoleError : public Error {
public:
  using Error::Error;
};

/// A series or iteration exhausted its budget without meeting tolerance.
class ConvergenceError : public Error {
public:
  using Error::Error;
};

/// Precondition on an argument was violated (empty interval, bad size, ...).
class DomainError : public Error {
public:
  using Error::Error;
};

/// A function returned NaN/Inf where a finite value was required.
class EvaluationError : public Error {
public:
  using Error::Error;
};

/// The symbol 1 - F does not admit a Wiener-Hopf factorization.
class AdmissibilityError : public Error {
public:
  using Error::Error;
};

/// A quantity that must be real came out with a significant imaginary part.
class RealnessError : public Error {
public:
  using Error::Error;
};

} // namespace whdet
