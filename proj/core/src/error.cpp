#include "cycavoid/error.hpp"

namespace cycavoid {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::EmptyPoint: return "EmptyPoint";
    case ErrorCode::TooShort: return "TooShort";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::InvalidPermutation: return "InvalidPermutation";
    case ErrorCode::InvalidPattern: return "InvalidPattern";
    case ErrorCode::InvalidScheme: return "InvalidScheme";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::ResolutionTooHigh: return "ResolutionTooHigh";
    case ErrorCode::RequiresNonnegative: return "RequiresNonnegative";
    case ErrorCode::EigenFailure: return "EigenFailure";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
  }
  return "Unknown";
}

}  // namespace cycavoid
