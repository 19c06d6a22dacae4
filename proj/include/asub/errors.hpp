#pragma once

#include <stdexcept>
#include <string>

namespace asub {

// Adaptive integration failed to reach its error budget.
class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument lies outside the mathematical domain of the operation.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// The model lacks an ingredient the operation needs (transition density,
// closed-form exponential moment, ...).
class UnsupportedModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A time integral diverges at the calendar origin and no closed form covers it.
class SingularOriginError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid or inconsistent run configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace asub
