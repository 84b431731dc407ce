#pragma once

#include <stdexcept>
#include <string>

namespace presto {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Named trace column or configuration key that does not exist.
class LookupError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Reduced-order model whose Galerkin denominator vanishes.
class SingularModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Control law with a zero input gain.
class SingularInputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Kalman update with a non-positive innovation covariance.
class SingularInnovationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent configuration; maps to CLI exit code 1.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Closed-loop state left the admissible region; maps to CLI exit code 2.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, double time)
      : std::runtime_error(what), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

}  // namespace presto
