#pragma once

#include <stdexcept>
#include <string>

namespace exomap {

// Error taxonomy shared across the library. The CLI maps these onto its
// exit-code contract (2 config, 3 data, 4 numerical).
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid arguments, bad geometry, violated preconditions.
class InvalidArgumentError : public Error {
 public:
  using Error::Error;
};

// Query outside of a grid window or coverage area.
class OutOfBoundsError : public Error {
 public:
  using Error::Error;
};

// Malformed or unreadable configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Missing, truncated, or inconsistent data files / inputs.
class DataError : public Error {
 public:
  using Error::Error;
};

// Optimization divergence, non-finite costs, no RANSAC consensus.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace exomap
