#pragma once

#include <stdexcept>
#include <string>

namespace abelpide {

/// Adaptive quadrature hit its depth limit before meeting the tolerance.
class NonConvergenceError : public std::runtime_error {
 public:
  explicit NonConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

/// Zero pivot during a tridiagonal elimination.
class SingularMatrixError : public std::runtime_error {
 public:
  explicit SingularMatrixError(const std::string& what) : std::runtime_error(what) {}
};

/// Vectors handed to a memory sum or a matrix product disagree in length.
class LengthMismatchError : public std::invalid_argument {
 public:
  explicit LengthMismatchError(const std::string& what) : std::invalid_argument(what) {}
};

/// Malformed or inconsistent experiment configuration.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace abelpide
