#pragma once

#include <stdexcept>
#include <string>

namespace spike_regions {

/// Bad arguments or a violated model invariant (beta outside [0,1], theta <= 0,
/// mismatched dimensions, ...). The CLI maps this to exit code 2.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input dimension does not match the network.
class DimensionError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Malformed or incompatible file content (schema, version, number syntax).
class FormatError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// File system failure. The CLI maps this to exit code 3.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace spike_regions
