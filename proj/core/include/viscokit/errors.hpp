// Exception hierarchy shared by all viscokit components.

#pragma once

#include <stdexcept>
#include <string>

namespace viscokit {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A tensor that must be symmetric positive definite is not.
class NotSPD : public Error {
 public:
  using Error::Error;
};

// Argument outside the mathematical domain of a function (lambda <= 0, J <= 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Value outside the range of a (non-coercive) scale function.
class RangeError : public Error {
 public:
  using Error::Error;
};

// Operation not defined for this model family.
class Unsupported : public Error {
 public:
  using Error::Error;
};

// det(Ctil) deviates from 1 beyond tolerance.
class UnimodularViolation : public Error {
 public:
  using Error::Error;
};

// Chain network stretch reached the locking limit of the inverse Langevin function.
class ChainLimit : public Error {
 public:
  using Error::Error;
};

// Iterative solve exhausted its iteration budget.
class NoConvergence : public Error {
 public:
  using Error::Error;
};

// Factorization of the local iteration matrix failed.
class SingularK : public Error {
 public:
  using Error::Error;
};

class LengthMismatch : public Error {
 public:
  using Error::Error;
};

class EmptySet : public Error {
 public:
  using Error::Error;
};

// Every probe of the calibration objective was infeasible.
class AllEvaluationsFailed : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class DataError : public Error {
 public:
  using Error::Error;
};

}  // namespace viscokit
