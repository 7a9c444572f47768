#pragma once

#include <stdexcept>
#include <string>

namespace sasim {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Operand or accumulator left the representable fixed-point range.
class OverflowError : public Error {
 public:
  using Error::Error;
};

// Bad shapes, flags, or kernel parameters.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Zero or near-zero pivot in the triangular solve.
class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

// Non-positive pivot during factorization.
class NotPositiveDefiniteError : public Error {
 public:
  using Error::Error;
};

// Structurally invalid schedule: empty program, buffer overflow,
// weight overwrite while a dependent multiply is in flight, bad refs.
class ScheduleError : public Error {
 public:
  using Error::Error;
};

// Per-cycle SRAM port or shift-bandwidth budget exceeded at run time.
class ResourceViolationError : public Error {
 public:
  using Error::Error;
};

}  // namespace sasim
