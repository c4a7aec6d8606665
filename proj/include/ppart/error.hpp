#pragma once

#include <stdexcept>
#include <string>

namespace ppart {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class ArithmeticOverflow : public Error {
 public:
  using Error::Error;
};

/// Raised by sampling operations on varieties that carry no parametric sampler.
class UnsupportedVariety : public Error {
 public:
  using Error::Error;
};

/// Root isolation or a linear solve produced non-finite or non-convergent values.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

/// The gradient certificate B * delta < epsilon could not be met.
class ScheduleInfeasible : public Error {
 public:
  using Error::Error;
};

/// A point lies on a hemisphere boundary (some t_j is numerically zero).
class BoundaryPoint : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace ppart
