#pragma once

#include <stdexcept>
#include <string>

namespace stepprec {

/// Invalid argument value or configuration field.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Timestep (or other index) outside its valid range.
class IndexError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Vector or matrix dimensions do not agree.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Requested speedup cannot be reached with the given per-step speedup.
class InfeasibleTargetError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Exhaustive enumeration would exceed the configured cap.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// A correlation statistic is undefined (e.g. constant input).
class UndefinedCorrelationError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace stepprec
