#include "cframe/error.hpp"

namespace cframe {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DescriptorMismatch: return "DescriptorMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NotPositive: return "NotPositive";
    case ErrorCode::NotSelfAdjoint: return "NotSelfAdjoint";
    case ErrorCode::Singular: return "Singular";
    case ErrorCode::NotInGlPlus: return "NotInGlPlus";
    case ErrorCode::MaxIterExceeded: return "MaxIterExceeded";
    case ErrorCode::NotAFrame: return "NotAFrame";
    case ErrorCode::NotSurjective: return "NotSurjective";
    case ErrorCode::NonCommuting: return "NonCommuting";
    case ErrorCode::NotMultiplicationOperator: return "NotMultiplicationOperator";
    case ErrorCode::NotCommutative: return "NotCommutative";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

void fail(ErrorCode code, const std::string& what) {
  throw Error(code, std::string(to_string(code)) + ": " + what);
}

}  // namespace cframe
