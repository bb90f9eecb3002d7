#include "mise/common/error.hpp"

namespace mise {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::MalformedTranscript: return "MalformedTranscript";
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::SchemaViolation: return "SchemaViolation";
    case ErrorCode::DescriberUnavailable: return "DescriberUnavailable";
    case ErrorCode::ClassificationUnavailable: return "ClassificationUnavailable";
    case ErrorCode::GenerationUnavailable: return "GenerationUnavailable";
    case ErrorCode::AdapterUnavailable: return "AdapterUnavailable";
    case ErrorCode::ClockViolation: return "ClockViolation";
    case ErrorCode::BudgetTooSmall: return "BudgetTooSmall";
    case ErrorCode::NoSegmentFound: return "NoSegmentFound";
    case ErrorCode::InvalidCommand: return "InvalidCommand";
    case ErrorCode::StartupFailure: return "StartupFailure";
    case ErrorCode::IncompleteAnnotation: return "IncompleteAnnotation";
    case ErrorCode::ScriptError: return "ScriptError";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace mise
