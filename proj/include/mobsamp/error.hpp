#pragma once

#include <stdexcept>
#include <string>

namespace mobsamp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or out-of-contract input (non-unit direction, negative radius, ...).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A ball-measure query below the declared resolution of a discrete measure.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

/// A one-dimensional slice that vanishes identically on the scanned interval.
class DegenerateSliceError : public Error {
 public:
  using Error::Error;
};

/// Membership can only be decided approximately for this shape.
class ApproximateMembershipError : public Error {
 public:
  using Error::Error;
};

}  // namespace mobsamp
