#include "inceprop/errors.hpp"

namespace inceprop {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::KineticDegenerate: return "KineticDegenerate";
    case ErrorCode::PumpOutOfDomain: return "PumpOutOfDomain";
    case ErrorCode::NonFiniteCoefficient: return "NonFiniteCoefficient";
    case ErrorCode::StepSizeUnderflow: return "StepSizeUnderflow";
    case ErrorCode::ToleranceNotMet: return "ToleranceNotMet";
    case ErrorCode::TruncationTooSmall: return "TruncationTooSmall";
    case ErrorCode::CausticEncountered: return "CausticEncountered";
    case ErrorCode::TimeNotPositive: return "TimeNotPositive";
    case ErrorCode::GridUnderResolved: return "GridUnderResolved";
    case ErrorCode::TailNotDecayed: return "TailNotDecayed";
    case ErrorCode::NonConvergentIntegral: return "NonConvergentIntegral";
    case ErrorCode::InvalidInvariantConstant: return "InvalidInvariantConstant";
    case ErrorCode::UnsupportedModel: return "UnsupportedModel";
    case ErrorCode::LinearSolveFailure: return "LinearSolveFailure";
    case ErrorCode::BoundaryContamination: return "BoundaryContamination";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
  }
  return "Unknown";
}

}  // namespace inceprop
