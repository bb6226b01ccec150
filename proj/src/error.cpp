#include "chordal_sdp/error.hpp"

namespace chordal_sdp {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kIndexOutOfBlock: return "IndexOutOfBlock";
    case ErrorCode::kDuplicateEntry: return "DuplicateEntry";
    case ErrorCode::kPatternViolation: return "PatternViolation";
    case ErrorCode::kAsymmetricData: return "AsymmetricData";
    case ErrorCode::kNotChordal: return "NotChordal";
    case ErrorCode::kEigenFailure: return "EigenFailure";
    case ErrorCode::kRankDeficient: return "RankDeficient";
    case ErrorCode::kNotFactored: return "NotFactored";
    case ErrorCode::kInstanceTooLarge: return "InstanceTooLarge";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace chordal_sdp
