#pragma once

#include <stdexcept>

namespace trifin {

/// Invalid caller-supplied values: non-finite numbers, out-of-range
/// indices, malformed arguments.
struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// An exact (undamped) IK solve was requested at a singular configuration.
struct SingularityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed configuration or trajectory data.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace trifin
