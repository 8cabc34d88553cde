#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cqht {

enum class ErrorCode {
  NotHermitian,
  NotPositive,
  NotUnitTrace,
  NotNormalized,
  NotPure,
  NoConvergence,
  DimensionMismatch,
  DimensionOverflow,
  PriorOutOfRange,
  DuplicateState,
  EmptySet,
  TrivialInstance,
  OverlapDegenerate,
  FmaxConstraintViolated,
  Overflow,
  HellingerConstraintViolated,
  EpsilonZero,
  LdpCertificateFailed,
  BudgetExceeded,
  PreconditionViolated,
  InputParse,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI in particular) can emit structured diagnostics.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        detail_(message) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace cqht
