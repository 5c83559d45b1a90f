#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace bilin {

enum class ErrorKind {
  DivisionByZero,
  FieldMismatch,
  InvalidField,
  InfiniteField,
  FiniteField,
  DimensionMismatch,
  AmbientMismatch,
  FlavorViolation,
  FlavorMismatch,
  NotMonomorphism,
  Inconsistent,
  PreconditionFailed,
  DiagramNotCommuting,
  IndependenceViolated,
  ContainsLinearEquation,
  NotQuantifierFree,
  TypeMismatch,
  SearchExhausted,
  ClosureBudgetExceeded,
  UnboundVariable,
  InvalidArgument,
  Parse,
};

const char* to_string(ErrorKind kind);

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t position, const std::string& message,
             std::vector<std::string> expected = {});
  std::size_t position() const noexcept { return position_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  std::size_t position_;
  std::vector<std::string> expected_;
};

}  // namespace bilin
