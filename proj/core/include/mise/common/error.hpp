#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mise {

enum class ErrorCode {
  EmptyInput,
  MalformedTranscript,
  InvalidInput,
  SchemaViolation,
  DescriberUnavailable,
  ClassificationUnavailable,
  GenerationUnavailable,
  AdapterUnavailable,
  ClockViolation,
  BudgetTooSmall,
  NoSegmentFound,
  InvalidCommand,
  StartupFailure,
  IncompleteAnnotation,
  ScriptError,
  ParseError,
  IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

// Every failure the engine reports carries one of the codes above; callers
// branch on code(), never on the message text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace mise
