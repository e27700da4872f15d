#pragma once

#include <stdexcept>
#include <string>

namespace qdot {

enum class ErrorCode {
  InvalidBounds,
  TooFewPoints,
  LengthMismatch,
  OutOfDomain,
  SectorViolation,
  DegenerateSpectrum,
  TruncationTooSmall,
  GridMismatch,
  ChannelCount,
  DegenerateLevel,
  NotEmbedded,
  ThresholdCollision,
  NearThreshold,
  SingularSystem,
  ExtrapolationFailure,
  NoPoleInWindow,
  ContinuumContamination,
  RangeTooNarrow,
  BudgetExceeded,
  MissingColumns,
  ConfigInvalid,
  StageFailure,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace qdot
