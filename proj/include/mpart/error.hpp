#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mpart {

enum class ErrorCode {
  InvalidArgument,
  NearEquator,
  AtInfinity,
  AtomOnBoundary,
  ParseError,
  DimensionMismatch,
  DegenerateProjection,
  NoBisection,
  BlockMismatch,
  ZeroVector,
  AliasingError,
  NearZero,
  GeneralPositionViolation,
  UnsupportedDimension,
  InfeasibleDimension,
  Io,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library; the code identifies the failure.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void require(bool condition, const std::string& message) {
  if (!condition) fail(ErrorCode::InvalidArgument, message);
}

}  // namespace mpart
