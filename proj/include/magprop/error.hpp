#pragma once

#include <stdexcept>
#include <string>

namespace magprop {

enum class ErrorKind {
  InvalidInput,
  UnsupportedOrder,
  TruncationTooSmall,
  InvalidMatrix,
  InsufficientResolution,
  ResonantParameter,
  NoConvergence,
  SymmetryViolation,
  HypothesisViolation,
  ResolutionError,
};

const char* to_string(ErrorKind kind);

/// Single exception type for the library; callers dispatch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::UnsupportedOrder: return "UnsupportedOrder";
    case ErrorKind::TruncationTooSmall: return "TruncationTooSmall";
    case ErrorKind::InvalidMatrix: return "InvalidMatrix";
    case ErrorKind::InsufficientResolution: return "InsufficientResolution";
    case ErrorKind::ResonantParameter: return "ResonantParameter";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::SymmetryViolation: return "SymmetryViolation";
    case ErrorKind::HypothesisViolation: return "HypothesisViolation";
    case ErrorKind::ResolutionError: return "ResolutionError";
  }
  return "Unknown";
}

}  // namespace magprop
