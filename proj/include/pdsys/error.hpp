#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pdsys {

/// Failure categories raised by the toolkit. The CLI maps them onto exit codes.
enum class ErrorCode {
  kNonUnitDirection,
  kSingularZ,
  kSingularS0,
  kDomainViolation,
  kShapeMismatch,
  kEigenFailure,
  kHypothesisViolation,
  kSkFails,
  kNoFeasibleEpsilons,
  kNonPositiveRho,
  kInsufficientGrid,
  kBlockOutOfRange,
  kDegenerateWindow,
  kCflViolation,
  kBlowupDetected,
  kParameterViolation,
  kAssumptionGViolation,
  kConfigParseError,
  kModelUnknown,
  kIoError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace pdsys
