#pragma once

#include <stdexcept>
#include <string>

namespace ctgibbs {

// Invalid or inconsistent configuration (CLI exit code 2).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Missing, malformed or dimensionally inconsistent data files (exit code 3).
struct DataError : std::runtime_error {
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure: solver breakdown, non-finite state (exit code 4).
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace ctgibbs
