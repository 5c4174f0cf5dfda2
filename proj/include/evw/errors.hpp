#pragma once

#include <stdexcept>
#include <string>

namespace evw {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed arguments: empty grids, dimension mismatches, bad parameters.
class InvalidInputError : public Error {
 public:
  using Error::Error;
};

/// Spectral mode detection produced no usable seeds.
class DetectionError : public Error {
 public:
  using Error::Error;
};

/// Filter bank violates the frame lower bound (zero summed energy somewhere).
class FrameError : public Error {
 public:
  using Error::Error;
};

/// Filesystem / file format failures.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace evw
