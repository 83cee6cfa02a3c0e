#include "rdcalib/error.hpp"

namespace rdcalib {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::RadiusOutOfRange: return "RadiusOutOfRange";
    case ErrorCode::NoRealRoot: return "NoRealRoot";
    case ErrorCode::NonConvergence: return "NonConvergence";
    case ErrorCode::ZeroMatrix: return "ZeroMatrix";
    case ErrorCode::DegenerateE: return "DegenerateE";
    case ErrorCode::NoPositiveDepth: return "NoPositiveDepth";
    case ErrorCode::ParallelRays: return "ParallelRays";
    case ErrorCode::ZeroTranslation: return "ZeroTranslation";
    case ErrorCode::DuplicatePoints: return "DuplicatePoints";
    case ErrorCode::EigenFailure: return "EigenFailure";
    case ErrorCode::NoCandidate: return "NoCandidate";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::NoModelFound: return "NoModelFound";
    case ErrorCode::InvalidDepthRange: return "InvalidDepthRange";
    case ErrorCode::SingularDenominator: return "SingularDenominator";
    case ErrorCode::EmptyOverlap: return "EmptyOverlap";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::ZeroGroundTruth: return "ZeroGroundTruth";
    case ErrorCode::MissingInput: return "MissingInput";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace rdcalib
