#pragma once

#include <stdexcept>
#include <string>

namespace nlsblow {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameters, mismatched grids, malformed input files.
class ConfigError : public Error {
public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
  using Error::Error;
};

/// Iterative solver failed to reach its tolerance.
class ConvergenceError : public Error {
public:
  using Error::Error;
};

/// A fit or estimate could not be formed from the supplied data.
class EstimationError : public Error {
public:
  using Error::Error;
};

} // namespace nlsblow
