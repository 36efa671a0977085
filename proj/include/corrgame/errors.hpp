#pragma once

#include <stdexcept>
#include <string>

namespace corrgame {

/// Bad user input: malformed config files, unknown keys, parameter values
/// outside their documented domain. The CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Non-finite values detected mid-computation (diverged training, bad
/// user-supplied reward tables, ...). The CLI maps this to exit code 3.
struct NumericError : std::runtime_error {
  explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace corrgame
