#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace dvrlu {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Precision failures. The CLI maps every subclass to exit code 3.
class PrecisionError : public Error {
 public:
  using Error::Error;
};

class DivisionByUnknownZero : public PrecisionError {
 public:
  DivisionByUnknownZero() : PrecisionError("division by an element indistinguishable from zero") {}
};

class AmbiguousValuation : public PrecisionError {
 public:
  AmbiguousValuation(std::size_t row, std::size_t col)
      : PrecisionError("pivot comparison undecidable at (" + std::to_string(row + 1) + "," +
                       std::to_string(col + 1) + ")"),
        row_(row),
        col_(col) {}
  explicit AmbiguousValuation(const std::string& what)
      : PrecisionError(what), row_(0), col_(0) {}
  std::size_t row() const { return row_; }
  std::size_t col() const { return col_; }

 private:
  std::size_t row_, col_;
};

class DegenerateInput : public PrecisionError {
 public:
  using PrecisionError::PrecisionError;
};

class DegenerateDecomposition : public PrecisionError {
 public:
  using PrecisionError::PrecisionError;
};

class InsufficientLift : public PrecisionError {
 public:
  explicit InsufficientLift(std::int64_t required)
      : PrecisionError("lift precision too small, need N' >= " + std::to_string(required)),
        required_(required) {}
  std::int64_t required_precision() const { return required_; }

 private:
  std::int64_t required_;
};

class ExhaustedRetries : public Error {
 public:
  using Error::Error;
};

class CoincidentPoints : public Error {
 public:
  using Error::Error;
};

class NotSorted : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace dvrlu
