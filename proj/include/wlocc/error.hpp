#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wlocc {

enum class ErrorCode {
  EmptyVector,
  NegativeComponent,
  NonFiniteComponent,
  SumExceedsOne,
  DimensionMismatch,
  NotWClassForm,
  InvalidOutcome,
  ComponentOverflow,
  SigmaOutOfRange,
  DegenerateComponent,
  ProbabilityTooSmall,
  ProbabilityOutOfRange,
  TargetNotBelow,
  TooFewParties,
  InvalidMeasurement,
  PartyOutOfRange,
  TooManyParties,
  UnrealizableStep,
  ProductState,
  TargetUnreachable,
  StepPreconditionViolated,
  UnclassifiedTree,
  PreconditionViolated,
  ZeroComponent,
  DomainError,
  InfeasiblePoint,
  ParseError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyVector: return "EmptyVector";
    case ErrorCode::NegativeComponent: return "NegativeComponent";
    case ErrorCode::NonFiniteComponent: return "NonFiniteComponent";
    case ErrorCode::SumExceedsOne: return "SumExceedsOne";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotWClassForm: return "NotWClassForm";
    case ErrorCode::InvalidOutcome: return "InvalidOutcome";
    case ErrorCode::ComponentOverflow: return "ComponentOverflow";
    case ErrorCode::SigmaOutOfRange: return "SigmaOutOfRange";
    case ErrorCode::DegenerateComponent: return "DegenerateComponent";
    case ErrorCode::ProbabilityTooSmall: return "ProbabilityTooSmall";
    case ErrorCode::ProbabilityOutOfRange: return "ProbabilityOutOfRange";
    case ErrorCode::TargetNotBelow: return "TargetNotBelow";
    case ErrorCode::TooFewParties: return "TooFewParties";
    case ErrorCode::InvalidMeasurement: return "InvalidMeasurement";
    case ErrorCode::PartyOutOfRange: return "PartyOutOfRange";
    case ErrorCode::TooManyParties: return "TooManyParties";
    case ErrorCode::UnrealizableStep: return "UnrealizableStep";
    case ErrorCode::ProductState: return "ProductState";
    case ErrorCode::TargetUnreachable: return "TargetUnreachable";
    case ErrorCode::StepPreconditionViolated: return "StepPreconditionViolated";
    case ErrorCode::UnclassifiedTree: return "UnclassifiedTree";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::ZeroComponent: return "ZeroComponent";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::InfeasiblePoint: return "InfeasiblePoint";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Every failure in the library surfaces as this exception; code() is the
/// machine-readable reason and is stable across releases.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace wlocc
