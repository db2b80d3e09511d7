#ifndef ZOCOOP_ERRORS_HPP
#define ZOCOOP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace zocoop {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A vector's length does not match the partition it is used with.
class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A power-law exponent lies outside its admissible range.
class OutOfRangeExponent : public Error {
 public:
  using Error::Error;
};

/// A schedule base (or other required-positive quantity) is not positive.
class NonPositiveBase : public Error {
 public:
  using Error::Error;
};

/// A broadcast was posted with a timestamp different from the current round.
class StaleTimestamp : public Error {
 public:
  using Error::Error;
};

/// A perturbation was drawn twice for the same round.
class DuplicateRound : public Error {
 public:
  using Error::Error;
};

/// A perturbation older than the buffer capacity was requested. This means
/// the delay bound was violated and the run must abort.
class BufferMiss : public Error {
 public:
  using Error::Error;
};

/// A decision update produced or consumed a NaN/Inf value.
class NonFiniteUpdate : public Error {
 public:
  using Error::Error;
};

/// The smoothing radius fell below the configured numerical floor.
class SmoothingUnderflow : public Error {
 public:
  using Error::Error;
};

/// A summary over gradient norms was requested for a problem without an
/// analytic gradient oracle.
class GradientUnavailable : public Error {
 public:
  using Error::Error;
};

/// An experiment configuration file failed to parse or validate.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A file could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace zocoop

#endif  // ZOCOOP_ERRORS_HPP
