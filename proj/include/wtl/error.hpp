#pragma once

#include <stdexcept>
#include <string>

namespace wtl {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A parameter lies outside the range where the formula or inequality is claimed.
class DomainError : public Error {
public:
  using Error::Error;
};

/// A stored sequence is too short to answer without extrapolating.
class TruncationError : public Error {
public:
  using Error::Error;
};

/// Enumeration or integer conversion exceeds representable limits.
class RangeError : public Error {
public:
  using Error::Error;
};

/// A tail sum did not meet its stopping rule within the term budget.
class DivergenceError : public Error {
public:
  using Error::Error;
};

/// An iteration or term budget was exhausted.
class BudgetError : public Error {
public:
  using Error::Error;
};

class UnsupportedError : public Error {
public:
  using Error::Error;
};

/// Least-squares design without full column rank.
class SingularityError : public Error {
public:
  SingularityError(const std::string& what, double condition)
      : Error(what), condition_(condition) {}

  double condition() const noexcept { return condition_; }

private:
  double condition_;
};

class SamplingError : public Error {
public:
  using Error::Error;
};

class FitError : public Error {
public:
  using Error::Error;
};

class ValidationError : public Error {
public:
  using Error::Error;
};

} // namespace wtl
