#pragma once

#include <stdexcept>
#include <string>

namespace mlsg {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed config file, unknown key, bad preset name.
struct ConfigError : Error {
  using Error::Error;
};

/// Malformed or inconsistent input data (parse failures, id out of range,
/// label id >= C, insufficient labels for a split).
struct DataError : Error {
  using Error::Error;
};

/// Matrix shapes that do not chain.
struct DimensionError : Error {
  using Error::Error;
};

/// Argument outside its mathematical domain (negative weight, k >= n, t <= 0).
struct DomainError : Error {
  using Error::Error;
};

/// Non-finite value produced where a finite one is required.
struct NumericError : Error {
  using Error::Error;
};

/// Operation called in the wrong order (backward without forward cache).
struct StateError : Error {
  using Error::Error;
};

/// Internal consistency check failed (e.g. attention row off the simplex).
struct IntegrityError : Error {
  using Error::Error;
};

}  // namespace mlsg
