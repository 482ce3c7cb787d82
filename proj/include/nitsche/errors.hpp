#pragma once

#include <stdexcept>
#include <string>

namespace nitsche {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Degenerate or inconsistent geometry (polygons, meshes, interface network).
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// A parameter outside its admissible range.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Scenario/config parsing or validation failure.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Factorization failure, Newton divergence, iteration cap.
class SolverError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace nitsche
