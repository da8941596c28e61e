#include "pdsys/error.hpp"

namespace pdsys {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNonUnitDirection: return "NonUnitDirection";
    case ErrorCode::kSingularZ: return "SingularZ";
    case ErrorCode::kSingularS0: return "SingularS0";
    case ErrorCode::kDomainViolation: return "DomainViolation";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kEigenFailure: return "EigenFailure";
    case ErrorCode::kHypothesisViolation: return "HypothesisViolation";
    case ErrorCode::kSkFails: return "SkFails";
    case ErrorCode::kNoFeasibleEpsilons: return "NoFeasibleEpsilons";
    case ErrorCode::kNonPositiveRho: return "NonPositiveRho";
    case ErrorCode::kInsufficientGrid: return "InsufficientGrid";
    case ErrorCode::kBlockOutOfRange: return "BlockOutOfRange";
    case ErrorCode::kDegenerateWindow: return "DegenerateWindow";
    case ErrorCode::kCflViolation: return "CflViolation";
    case ErrorCode::kBlowupDetected: return "BlowupDetected";
    case ErrorCode::kParameterViolation: return "ParameterViolation";
    case ErrorCode::kAssumptionGViolation: return "AssumptionGViolation";
    case ErrorCode::kConfigParseError: return "ConfigParseError";
    case ErrorCode::kModelUnknown: return "ModelUnknown";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace pdsys
