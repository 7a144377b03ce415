#pragma once

#include <stdexcept>
#include <string>

namespace qmp {

/// Raised when an iterative or quadrature routine fails to meet its tolerance,
/// or a formula hits a degenerate point. Callers in the CLI map this to exit 2.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed experiment configuration (CLI exit 1).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qmp
