#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cycavoid {

enum class ErrorCode {
  EmptyPoint,
  TooShort,
  TooLarge,
  InvalidPermutation,
  InvalidPattern,
  InvalidScheme,
  Overflow,
  ResolutionTooHigh,
  RequiresNonnegative,
  EigenFailure,
  OutOfDomain,
};

std::string_view to_string(ErrorCode code) noexcept;

// All library failures surface as this exception; `code()` identifies the
// failure class so callers (the CLI in particular) can map it to an exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cycavoid
