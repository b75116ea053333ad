#pragma once

#include <stdexcept>
#include <string>

namespace charged_drop {

/// Base class for every error raised by the library. Maps to exit status 1
/// in the command-line tool.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A bracketed root search found no sign change, or the root it found does
/// not meet the residual tolerance.
class NoRootError : public Error {
 public:
  using Error::Error;
};

/// A search bracket does not straddle the requested transition.
class BracketError : public Error {
 public:
  using Error::Error;
};

/// Geometry that cannot be realized (overlapping charges, impossible
/// tangency, unpackable charge count).
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace charged_drop
