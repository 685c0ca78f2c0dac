#pragma once

#include <stdexcept>
#include <string>

namespace calgraph {

/// Base class for all library failures.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid graph data: asymmetric weights, nonpositive measures, self-loops,
/// duplicate edges, disconnected windows.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// Bad user-supplied configuration or parameters.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A requested ball, cylinder, cut-off or march does not fit inside the
/// materialized window. Raised instead of silently truncating sums.
class CoverageError : public Error {
 public:
  using Error::Error;
};

/// Exact-enumeration size caps exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Contract violation: vertex outside a window, value undefined where
/// requested, unsupported field/quantity pairing, broken chain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Explicit time integration blew up.
class IntegrationError : public Error {
 public:
  using Error::Error;
};

}  // namespace calgraph
