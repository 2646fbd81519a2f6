#ifndef SIGID_ERRORS_HPP_
#define SIGID_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace sigid {

// Base class for everything this library throws on its own behalf.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raster with impossible geometry (zero dimension, size/data mismatch, ...).
class InvalidImageError : public Error {
 public:
  using Error::Error;
};

// Bad tuning parameter (even filter window, factor out of range, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Dimension mismatch between vectors/matrices that must agree.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Not enough samples to fit per-subject statistics.
class EnrollmentError : public Error {
 public:
  using Error::Error;
};

// Numerical failure (non-positive-definite covariance, ...).
class NumericError : public Error {
 public:
  using Error::Error;
};

// Violation of the evaluation protocol (empty gallery, bad split, ...).
class ProtocolError : public Error {
 public:
  using Error::Error;
};

// File parse/read/write failure.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace sigid

#endif  // SIGID_ERRORS_HPP_
