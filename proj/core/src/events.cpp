#include "mise/orchestrator/events.hpp"

#include "mise/common/error.hpp"

namespace mise {

std::string_view code(DialogueState s) noexcept {
  static constexpr std::array<std::string_view, 7> kCodes = {"S0", "S1", "S2", "S3", "S4", "S5", "S6"};
  return kCodes[static_cast<std::size_t>(s)];
}

std::string_view code(EventKind e) noexcept {
  static constexpr std::array<std::string_view, 10> kCodes = {"E1", "E2", "E3", "E4", "E5",
                                                              "E6", "E7", "E8", "E9", "E10"};
  return kCodes[static_cast<std::size_t>(e) - 1];
}

std::string_view name(DialogueState s) noexcept {
  switch (s) {
    case DialogueState::Idle: return "Idle";
    case DialogueState::FoodState: return "FoodState";
    case DialogueState::StepGuide: return "StepGuide";
    case DialogueState::ProblemSolving: return "ProblemSolving";
    case DialogueState::GeneralVisual: return "GeneralVisual";
    case DialogueState::CorrectionReview: return "CorrectionReview";
    case DialogueState::DetailElaboration: return "DetailElaboration";
  }
  return "?";
}

std::string_view name(EventKind e) noexcept {
  switch (e) {
    case EventKind::FoodStateQuery: return "FoodStateQuery";
    case EventKind::StepQuery: return "StepQuery";
    case EventKind::ProblemQuery: return "ProblemQuery";
    case EventKind::GeneralVisualQuery: return "GeneralVisualQuery";
    case EventKind::MissedStepDetected: return "MissedStepDetected";
    case EventKind::IncorrectStepDetected: return "IncorrectStepDetected";
    case EventKind::FollowUpDetails: return "FollowUpDetails";
    case EventKind::FlagResponseWrong: return "FlagResponseWrong";
    case EventKind::Reset: return "Reset";
    case EventKind::MediaControl: return "MediaControl";
  }
  return "?";
}

std::string_view to_string(ResetReason r) noexcept {
  return r == ResetReason::Satisfied ? "satisfied" : "idle_timeout";
}

std::optional<DialogueState> parse_state(std::string_view s) noexcept {
  for (auto st : kAllStates) {
    if (code(st) == s) return st;
  }
  return std::nullopt;
}

std::optional<EventKind> parse_event(std::string_view s) noexcept {
  for (auto e : kAllEvents) {
    if (code(e) == s) return e;
  }
  return std::nullopt;
}

InteractionEvent InteractionEvent::from_utterance(EventKind kind, std::uint64_t utterance_id) {
  if (is_alert(kind)) throw Error(ErrorCode::InvalidInput, "alert events cannot originate from an utterance");
  InteractionEvent e;
  e.kind = kind;
  e.utterance_id = utterance_id;
  if (kind == EventKind::Reset) e.reset_reason = ResetReason::Satisfied;
  return e;
}

InteractionEvent InteractionEvent::from_judgment(EventKind kind, std::uint64_t judgment_id) {
  if (!is_alert(kind)) throw Error(ErrorCode::InvalidInput, "only E5/E6 originate from a judgment");
  InteractionEvent e;
  e.kind = kind;
  e.judgment_id = judgment_id;
  return e;
}

InteractionEvent InteractionEvent::reset(ResetReason reason, std::optional<std::uint64_t> utterance_id) {
  InteractionEvent e;
  e.kind = EventKind::Reset;
  e.reset_reason = reason;
  e.utterance_id = utterance_id;
  return e;
}

}  // namespace mise
