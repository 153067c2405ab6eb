#pragma once

#include <stdexcept>
#include <string>

namespace bandcast {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Observation window with q > s.
class EmptyWindow : public Error {
 public:
  using Error::Error;
};

/// Malformed signal, config or model (non-finite values, bad lengths, Ω out of range).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Factorization failed and conjugate gradient did not reach tolerance either.
class NotPositiveDefinite : public Error {
 public:
  using Error::Error;
};

/// Gaussian elimination met a (numerically) zero pivot column.
class SingularSystem : public Error {
 public:
  using Error::Error;
};

/// Streaming push with t != previous t + 1.
class NonConsecutiveTime : public Error {
 public:
  using Error::Error;
};

}  // namespace bandcast
