#pragma once

#include <stdexcept>
#include <string>

namespace memdg {

/// Base class for all solver-library failures.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InterfaceNotAligned : Error {
  using Error::Error;
};

struct UnsupportedOrder : Error {
  using Error::Error;
};

struct CoefficientSingular : Error {
  using Error::Error;
};

struct NonFiniteValue : Error {
  using Error::Error;
};

struct NegativeRadicand : Error {
  using Error::Error;
};

struct NotLinear : Error {
  using Error::Error;
};

struct PicardDiverged : Error {
  using Error::Error;
};

struct SolverFailure : Error {
  using Error::Error;
};

struct NonFiniteState : Error {
  using Error::Error;
};

struct UsageError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

}  // namespace memdg
