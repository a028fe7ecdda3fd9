#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace inceprop {

enum class ErrorCode {
  InvalidArgument,
  KineticDegenerate,
  PumpOutOfDomain,
  NonFiniteCoefficient,
  StepSizeUnderflow,
  ToleranceNotMet,
  TruncationTooSmall,
  CausticEncountered,
  TimeNotPositive,
  GridUnderResolved,
  TailNotDecayed,
  NonConvergentIntegral,
  InvalidInvariantConstant,
  UnsupportedModel,
  LinearSolveFailure,
  BoundaryContamination,
  GridMismatch,
  ConfigInvalid,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (and the CLI) can dispatch on the kind without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace inceprop
