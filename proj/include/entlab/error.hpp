#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace entlab {

enum class ErrorCode {
  Shape,        // incompatible or non-square dimensions
  Size,         // tensor dimension above the configured maximum
  Domain,       // input violates a mathematical precondition
  NotPsd,       // eigenvalue below the PSD tolerance
  Structure,    // operator does not respect a declared block structure
  Consistency,  // internal cross-check failed (numerics bug, not bad input)
  Refused,      // problem too large for an exhaustive routine
  Config,       // malformed scenario or JSON document
  Io,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Shape: return "shape";
    case ErrorCode::Size: return "size";
    case ErrorCode::Domain: return "domain";
    case ErrorCode::NotPsd: return "not_psd";
    case ErrorCode::Structure: return "structure";
    case ErrorCode::Consistency: return "consistency";
    case ErrorCode::Refused: return "refused";
    case ErrorCode::Config: return "config";
    case ErrorCode::Io: return "io";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace entlab
