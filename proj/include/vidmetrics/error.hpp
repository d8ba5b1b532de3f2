#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace vidmetrics {

enum class ErrorCode {
  kBadMagic,
  kUnsupportedVersion,
  kUnsupportedDtype,
  kTruncated,
  kLengthMismatch,
  kNonFinite,
  kShapeMismatch,
  kInvalidArgument,
  kInsufficientSamples,
  kNotSymmetric,
  kConstantInput,
  kMissingScore,
  kMalformed,
  kIo,
};

std::string_view to_string(ErrorCode code);

// Usage-level errors map to CLI exit code 1, everything else to 2.
bool is_usage_error(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace vidmetrics
