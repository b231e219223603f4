#pragma once

#include <stdexcept>
#include <string>

namespace pan {

/// Precondition on argument shapes or ranges was not met.
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A linear system that must be invertible is (numerically) singular.
class SingularSystemError : public std::runtime_error {
 public:
  SingularSystemError(const std::string& what, double relative_min_singular_value)
      : std::runtime_error(what), relative_min_singular_value_(relative_min_singular_value) {}

  double relative_min_singular_value() const noexcept { return relative_min_singular_value_; }

 private:
  double relative_min_singular_value_;
};

/// Argument lies outside the set on which a quantity is defined.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Iteration produced a non-finite value.
class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operation is not defined for the given problem type.
class UnsupportedOperation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

#define PAN_REQUIRE(cond, msg)                 \
  do {                                         \
    if (!(cond)) {                             \
      throw ::pan::ContractViolation(msg);     \
    }                                          \
  } while (false)

}  // namespace pan
