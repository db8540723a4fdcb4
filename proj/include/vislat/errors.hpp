#pragma once

#include <stdexcept>
#include <string>

namespace vislat {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Requested table or enumeration would exceed its memory/size budget.
class SizeError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Modulus outside the proven cases (powers of two, odd primes).
class UnsupportedModulus : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Invalid walk configuration (dimension mismatch, boundary probabilities, ...).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Non-contiguous, overlapping or mismatched accumulator ranges.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Counter would saturate.
class OverflowError : public std::overflow_error {
 public:
  using std::overflow_error::overflow_error;
};

}  // namespace vislat
