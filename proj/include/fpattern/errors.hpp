#pragma once

#include <stdexcept>
#include <string>

namespace fpattern {

/// Invalid user input: grid bounds, profile parameters, config keys.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite state, non-positive density, quadrature failure.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fpattern
