#include "robcons/error.hpp"

namespace robcons {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "InvalidArgument";
    case ErrorKind::kDimensionMismatch: return "DimensionMismatch";
    case ErrorKind::kNotHurwitz: return "NotHurwitz";
    case ErrorKind::kNoStabilizingSolution: return "NoStabilizingSolution";
    case ErrorKind::kSingularSubspace: return "SingularSubspace";
    case ErrorKind::kEigenFailure: return "EigenFailure";
    case ErrorKind::kUnstableSystem: return "UnstableSystem";
    case ErrorKind::kBisectionStall: return "BisectionStall";
    case ErrorKind::kPoleOnAxis: return "PoleOnAxis";
    case ErrorKind::kFactorizationFailed: return "FactorizationFailed";
    case ErrorKind::kNotDetectable: return "NotDetectable";
    case ErrorKind::kNotStabilizable: return "NotStabilizable";
    case ErrorKind::kGridResolutionExceeded: return "GridResolutionExceeded";
    case ErrorKind::kOriginCrossing: return "OriginCrossing";
    case ErrorKind::kNotConnected: return "NotConnected";
    case ErrorKind::kTooLarge: return "TooLarge";
    case ErrorKind::kSingularL: return "SingularL";
    case ErrorKind::kMarginShortfall: return "MarginShortfall";
    case ErrorKind::kAlgebraicLoop: return "AlgebraicLoop";
    case ErrorKind::kEventGraphMismatch: return "EventGraphMismatch";
    case ErrorKind::kNumericalInconsistency: return "NumericalInconsistency";
    case ErrorKind::kConfig: return "ConfigError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message),
      kind_(kind) {}

}  // namespace robcons
