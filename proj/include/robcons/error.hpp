#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace robcons {

enum class ErrorKind {
  kInvalidArgument,
  kDimensionMismatch,
  kNotHurwitz,
  kNoStabilizingSolution,
  kSingularSubspace,
  kEigenFailure,
  kUnstableSystem,
  kBisectionStall,
  kPoleOnAxis,
  kFactorizationFailed,
  kNotDetectable,
  kNotStabilizable,
  kGridResolutionExceeded,
  kOriginCrossing,
  kNotConnected,
  kTooLarge,
  kSingularL,
  kMarginShortfall,
  kAlgebraicLoop,
  kEventGraphMismatch,
  kNumericalInconsistency,
  kConfig,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries a kind so callers (the CLI in
/// particular) can map it to a stable exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace robcons
