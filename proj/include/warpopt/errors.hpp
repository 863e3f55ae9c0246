#pragma once

#include <stdexcept>
#include <string>

namespace warpopt {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A point lies outside the domain of the map it was handed to.
class InfeasibleInput : public Error {
 public:
  using Error::Error;
};

/// The objective was queried outside its box. Raising this also bumps the
/// objective's violation counter and the process-wide audit counter.
class UnrelaxableViolation : public Error {
 public:
  using Error::Error;
};

/// A smooth gradient was requested where the merit function has a kink.
class NonsmoothPoint : public Error {
 public:
  using Error::Error;
};

class MissingOracle : public Error {
 public:
  using Error::Error;
};

class DegenerateNormalization : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline void require_same_size(long a, long b, const char* what) {
  if (a != b) {
    throw DimensionMismatch(std::string(what) + ": expected length " +
                            std::to_string(b) + ", got " + std::to_string(a));
  }
}

}  // namespace detail
}  // namespace warpopt
