#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace transference {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when an input violates an operation's precondition. The CLI maps
/// these to exit code 2.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Raised when a stage ran but could not deliver its result. The CLI maps
/// these to exit code 3.
class StageError : public Error {
 public:
  using Error::Error;
};

class CoprimalityViolation : public PreconditionError {
 public:
  CoprimalityViolation(std::uint64_t modulus, std::uint64_t factor)
      : PreconditionError("modulus " + std::to_string(modulus) +
                          " shares a factor with " + std::to_string(factor)),
        modulus_(modulus),
        factor_(factor) {}

  std::uint64_t modulus() const noexcept { return modulus_; }
  /// Smallest m in {2, ..., k-1} with gcd(N, m) > 1.
  std::uint64_t factor() const noexcept { return factor_; }

 private:
  std::uint64_t modulus_;
  std::uint64_t factor_;
};

class ArityMismatch : public PreconditionError {
 public:
  ArityMismatch(std::size_t expected, std::size_t got)
      : PreconditionError("arity mismatch: expected " +
                          std::to_string(expected) + ", got " +
                          std::to_string(got)) {}
};

class EmptySupport : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class ZeroMass : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class BudgetExceeded : public PreconditionError {
 public:
  BudgetExceeded(double cost, double budget)
      : PreconditionError("exact evaluation needs " + std::to_string(cost) +
                          " term evaluations, budget is " +
                          std::to_string(budget)),
        cost_(cost),
        budget_(budget) {}

  double cost() const noexcept { return cost_; }
  double budget() const noexcept { return budget_; }

 private:
  double cost_;
  double budget_;
};

class WrongK : public PreconditionError {
 public:
  explicit WrongK(int k)
      : PreconditionError("operation requires k = 3, got k = " +
                          std::to_string(k)) {}
};

class NotDominated : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

class RangeViolation : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

}  // namespace transference
