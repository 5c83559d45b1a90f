#include "bilin/error.hpp"

namespace bilin {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::FieldMismatch: return "FieldMismatch";
    case ErrorKind::InvalidField: return "InvalidField";
    case ErrorKind::InfiniteField: return "InfiniteField";
    case ErrorKind::FiniteField: return "FiniteField";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::AmbientMismatch: return "AmbientMismatch";
    case ErrorKind::FlavorViolation: return "FlavorViolation";
    case ErrorKind::FlavorMismatch: return "FlavorMismatch";
    case ErrorKind::NotMonomorphism: return "NotMonomorphism";
    case ErrorKind::Inconsistent: return "Inconsistent";
    case ErrorKind::PreconditionFailed: return "PreconditionFailed";
    case ErrorKind::DiagramNotCommuting: return "DiagramNotCommuting";
    case ErrorKind::IndependenceViolated: return "IndependenceViolated";
    case ErrorKind::ContainsLinearEquation: return "ContainsLinearEquation";
    case ErrorKind::NotQuantifierFree: return "NotQuantifierFree";
    case ErrorKind::TypeMismatch: return "TypeMismatch";
    case ErrorKind::SearchExhausted: return "SearchExhausted";
    case ErrorKind::ClosureBudgetExceeded: return "ClosureBudgetExceeded";
    case ErrorKind::UnboundVariable: return "UnboundVariable";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Parse: return "ParseError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(message), kind_(kind) {}

namespace {
std::string parse_message(std::size_t position, const std::string& message,
                          const std::vector<std::string>& expected) {
  std::string out = "parse error at position " + std::to_string(position) + ": " + message;
  if (!expected.empty()) {
    out += " (expected one of:";
    for (const auto& e : expected) out += " " + e;
    out += ")";
  }
  return out;
}
}  // namespace

ParseError::ParseError(std::size_t position, const std::string& message,
                       std::vector<std::string> expected)
    : Error(ErrorKind::Parse, parse_message(position, message, expected)),
      position_(position),
      expected_(std::move(expected)) {}

}  // namespace bilin
