#pragma once

#include <stdexcept>
#include <string>

namespace sat {

/// Invalid configuration or incompatible options (CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input data (CLI exit code 3).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite values during training or evaluation (CLI exit code 4).
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, long epoch = -1)
      : std::runtime_error(what), epoch_(epoch) {}
  long epoch() const noexcept { return epoch_; }

 private:
  long epoch_;
};

/// Operand shapes do not agree.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace sat
