#include "vidmetrics/error.hpp"

namespace vidmetrics {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kBadMagic: return "bad-magic";
    case ErrorCode::kUnsupportedVersion: return "unsupported-version";
    case ErrorCode::kUnsupportedDtype: return "unsupported-dtype";
    case ErrorCode::kTruncated: return "truncated";
    case ErrorCode::kLengthMismatch: return "length-mismatch";
    case ErrorCode::kNonFinite: return "non-finite";
    case ErrorCode::kShapeMismatch: return "shape-mismatch";
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kInsufficientSamples: return "insufficient-samples";
    case ErrorCode::kNotSymmetric: return "not-symmetric";
    case ErrorCode::kConstantInput: return "constant-input";
    case ErrorCode::kMissingScore: return "missing-score";
    case ErrorCode::kMalformed: return "malformed";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

bool is_usage_error(ErrorCode code) {
  return code == ErrorCode::kInvalidArgument;
}

}  // namespace vidmetrics
