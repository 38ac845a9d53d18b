#pragma once

#include <stdexcept>
#include <string>

namespace depstat {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Malformed or out-of-contract input (non-finite values, size mismatch, ...).
class InvalidInputError : public Error {
  public:
    using Error::Error;
};

/// Kernel bandwidth that is not strictly positive.
class InvalidBandwidthError : public InvalidInputError {
  public:
    using InvalidInputError::InvalidInputError;
};

/// A statistic was asked to run on dimensions it does not support.
class UnsupportedDimensionError : public Error {
  public:
    using Error::Error;
};

/// A null model was asked to run on a statistic it does not support.
class UnsupportedStatisticError : public Error {
  public:
    using Error::Error;
};

/// Sample too small for the requested estimator.
class InsufficientSampleError : public Error {
  public:
    using Error::Error;
};

/// Null distribution with non-positive variance; moment fit impossible.
class DegenerateNullError : public Error {
  public:
    using Error::Error;
};

/// A numerical oracle (quadrature) failed to converge.
class OracleFailureError : public Error {
  public:
    using Error::Error;
};

/// File read/write failure.
class IoError : public Error {
  public:
    using Error::Error;
};

/// CSV/JSON parse failure; carries the 1-based line where parsing stopped.
class ParseError : public IoError {
  public:
    ParseError(const std::string& what, long line) : IoError(what), line_(line) {}
    long line() const { return line_; }

  private:
    long line_;
};

}  // namespace depstat
