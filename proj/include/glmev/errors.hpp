#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace glmev {

enum class ErrorKind {
  kContractViolation,
  kNumeric,
  kSeparation,
  kNoConvergence,
  kSingularHessian,
  kDimensionTooLarge,
  kBudgetExceeded,
  kDegeneratePair,
  kPreconditionViolated,
  kOverflow,
  kParseError,
  kShapeMismatch,
  kInvalidResponse,
  kIo,
};

std::string_view to_string(ErrorKind kind);

// Single exception type for the library; callers branch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kContractViolation: return "ContractViolation";
    case ErrorKind::kNumeric: return "Numeric";
    case ErrorKind::kSeparation: return "Separation";
    case ErrorKind::kNoConvergence: return "NoConvergence";
    case ErrorKind::kSingularHessian: return "SingularHessian";
    case ErrorKind::kDimensionTooLarge: return "DimensionTooLarge";
    case ErrorKind::kBudgetExceeded: return "BudgetExceeded";
    case ErrorKind::kDegeneratePair: return "DegeneratePair";
    case ErrorKind::kPreconditionViolated: return "PreconditionViolated";
    case ErrorKind::kOverflow: return "Overflow";
    case ErrorKind::kParseError: return "ParseError";
    case ErrorKind::kShapeMismatch: return "ShapeMismatch";
    case ErrorKind::kInvalidResponse: return "InvalidResponse";
    case ErrorKind::kIo: return "Io";
  }
  return "Unknown";
}

inline void require(bool cond, const std::string& what) {
  if (!cond) throw Error(ErrorKind::kContractViolation, what);
}

}  // namespace glmev
