#pragma once

#include <limits>
#include <stdexcept>
#include <string>

namespace tailbound {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Result would overflow the floating-point range.
class RangeError : public std::range_error {
 public:
  using std::range_error::range_error;
};

/// Iterative method failed to reach the requested accuracy.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what,
                          double err_estimate = std::numeric_limits<double>::quiet_NaN())
      : std::runtime_error(what), err_estimate_(err_estimate) {}
  double error_estimate() const noexcept { return err_estimate_; }

 private:
  double err_estimate_;
};

/// Problem too large for an exact method.
class SizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// An extremal construction has no solution for the given parameters.
class ConstructionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tailbound
