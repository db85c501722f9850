#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace compnet {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shapes or block sizes that do not conform to the team configuration.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// Inputs that are well-formed but violate a required property
/// (e.g. a non-primitive combination matrix handed to perron_weights).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// The game lacks an operation the caller asked for (affine form, adversary oracle).
class CapabilityError : public Error {
 public:
  using Error::Error;
};

/// The operator is not strongly monotone, so no unique equilibrium is guaranteed.
class MonotonicityError : public Error {
 public:
  using Error::Error;
};

class StabilityError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A state entry became non-finite or exceeded the divergence threshold.
class DivergenceError : public Error {
 public:
  explicit DivergenceError(std::int64_t iteration)
      : Error("iterates diverged at iteration " + std::to_string(iteration)),
        iteration_(iteration) {}

  std::int64_t iteration() const noexcept { return iteration_; }

 private:
  std::int64_t iteration_;
};

}  // namespace compnet
