#pragma once

#include <stdexcept>
#include <string>

namespace rmc {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shape mismatch or an index / rank outside the admissible range.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A scalar parameter outside its domain (lambda <= 0, gamma not in (0,1), ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// A factorization failed to converge or produced non-finite values.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Malformed text input. The message carries the source and line number.
class ParseError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace rmc
