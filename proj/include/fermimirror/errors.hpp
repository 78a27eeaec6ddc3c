#pragma once

#include <stdexcept>

namespace fermimirror {

// Bad user-facing input (config files, CLI values, parameter records).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A numerical contract was violated (residual too large, divergence, ...).
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace fermimirror
