#pragma once

#include <stdexcept>
#include <string>

namespace stokrig {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Mismatched vector/matrix dimensions between arguments.
class DimensionError : public Error {
public:
  using Error::Error;
};

/// A matrix required to be SPD / full rank is not, even after regularization.
class IllConditionedError : public Error {
public:
  using Error::Error;
};

/// An argument violates its domain (bounds, sign, cardinality cap, ...).
class InvalidArgumentError : public Error {
public:
  using Error::Error;
};

/// Sample variance requested at a point with a single replication and no
/// externally supplied variance.
class InsufficientReplicationError : public Error {
public:
  using Error::Error;
};

/// Leave-one-out error is undefined or degenerate for the given data.
class LooError : public Error {
public:
  using Error::Error;
};

/// Model selection could not produce any admissible candidate.
class SelectionError : public Error {
public:
  using Error::Error;
};

/// The global optimizer exhausted its budget without a feasible evaluation.
class OptimizerError : public Error {
public:
  using Error::Error;
};

/// Malformed scenario/configuration input.
class ConfigError : public Error {
public:
  using Error::Error;
};

}  // namespace stokrig
