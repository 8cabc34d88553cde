#include "cqht/error.hpp"

namespace cqht {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NotPositive: return "NotPositive";
    case ErrorCode::NotUnitTrace: return "NotUnitTrace";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::NotPure: return "NotPure";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::DimensionOverflow: return "DimensionOverflow";
    case ErrorCode::PriorOutOfRange: return "PriorOutOfRange";
    case ErrorCode::DuplicateState: return "DuplicateState";
    case ErrorCode::EmptySet: return "EmptySet";
    case ErrorCode::TrivialInstance: return "TrivialInstance";
    case ErrorCode::OverlapDegenerate: return "OverlapDegenerate";
    case ErrorCode::FmaxConstraintViolated: return "FmaxConstraintViolated";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::HellingerConstraintViolated: return "HellingerConstraintViolated";
    case ErrorCode::EpsilonZero: return "EpsilonZero";
    case ErrorCode::LdpCertificateFailed: return "LdpCertificateFailed";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::InputParse: return "InputParse";
  }
  return "Unknown";
}

}  // namespace cqht
