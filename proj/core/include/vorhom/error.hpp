#pragma once

#include <stdexcept>
#include <string>

namespace vorhom {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed chains, complexes or references to unknown cells.
class StructuralError : public Error {
 public:
  using Error::Error;
};

/// Operator applied at a degree where it is undefined (e.g. boundary of a 0-chain).
class DegreeError : public StructuralError {
 public:
  using StructuralError::StructuralError;
};

/// Non-invertible metric, evaluation inside an excluded set, and similar.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// A transported node entered an exclusion zone.
class AdvectionError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// Syntax or semantic error in a text input, with a 1-based location.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, int line, int column = 0)
      : Error(format(message, line, column)), message_(message), line_(line), column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }
  /// The message without the location prefix.
  const std::string& message() const noexcept { return message_; }

 private:
  static std::string format(const std::string& message, int line, int column) {
    std::string where = "line " + std::to_string(line);
    if (column > 0) where += ", column " + std::to_string(column);
    return where + ": " + message;
  }

  std::string message_;
  int line_;
  int column_;
};

/// A scenario declares a property that fails verification.
class ValidationError : public Error {
 public:
  using Error::Error;
};

}  // namespace vorhom
