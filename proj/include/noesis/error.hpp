#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace noesis {

enum class ErrorKind {
  DuplicateName,
  ShapeMismatch,
  UnknownObject,
  UnknownAttribute,
  GranuleRegression,
  ParseError,
  ValidationError,
  CxtLossy,
  MissingTruth,
  DuplicateInstance,
  EmptyBasis,
  NoAttributes,
  ZeroState,
  BasisMismatch,
  ZeroProbability,
  EmptyContext,
  ProtocolViolation,
  OracleUnavailable,
  NotACounterexample,
  UnknownGranule,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Location is 1-based; column 0 means "whole line", line 0 means "whole document".
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column = 0)
      : Error(ErrorKind::ParseError, locate(message, line, column)), line_(line), column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  static std::string locate(const std::string& message, std::size_t line, std::size_t column) {
    if (line == 0) return message;
    std::string where = "line " + std::to_string(line);
    if (column) where += ", column " + std::to_string(column);
    return where + ": " + message;
  }

  std::size_t line_;
  std::size_t column_;
};

}  // namespace noesis
