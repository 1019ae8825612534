#pragma once

#include <stdexcept>
#include <string>

namespace htsgd {

/// Precondition of a public operation was not met.
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Parameters outside the admissible range of a construction.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An iterative solver hit its cap; carries the best objective value seen.
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double best_value)
      : std::runtime_error(what), best_value_(best_value) {}
  double best_value() const noexcept { return best_value_; }

 private:
  double best_value_;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw ContractViolation(message);
}

}  // namespace htsgd
