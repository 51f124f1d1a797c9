#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace scrn {

enum class ErrorKind {
  NonBracketable,
  InternalSamplingFailure,
  RepairExhausted,
  RejectionExhausted,
  ConfigInvalid,
  LengthMismatch,
  ZeroDemand,
  EmptyInput,
  ParseError,
  IoError,
};

std::string_view to_string(ErrorKind kind);

/// Single exception type for the library; `kind()` selects the failure class.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonBracketable: return "NonBracketable";
    case ErrorKind::InternalSamplingFailure: return "InternalSamplingFailure";
    case ErrorKind::RepairExhausted: return "RepairExhausted";
    case ErrorKind::RejectionExhausted: return "RejectionExhausted";
    case ErrorKind::ConfigInvalid: return "ConfigInvalid";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::ZeroDemand: return "ZeroDemand";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace scrn
