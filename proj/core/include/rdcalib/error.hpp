#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rdcalib {

enum class ErrorCode {
  RadiusOutOfRange,
  NoRealRoot,
  NonConvergence,
  ZeroMatrix,
  DegenerateE,
  NoPositiveDepth,
  ParallelRays,
  ZeroTranslation,
  DuplicatePoints,
  EigenFailure,
  NoCandidate,
  TooFewPoints,
  NoModelFound,
  InvalidDepthRange,
  SingularDenominator,
  EmptyOverlap,
  EmptyInput,
  ZeroGroundTruth,
  MissingInput,
  IoError,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code) noexcept;

// All library failures are reported through this exception type; the code
// identifies the failure class, the message carries context.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace rdcalib
