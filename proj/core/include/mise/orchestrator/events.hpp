#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace mise {

enum class DialogueState : std::uint8_t {
  Idle = 0,
  FoodState = 1,
  StepGuide = 2,
  ProblemSolving = 3,
  GeneralVisual = 4,
  CorrectionReview = 5,
  DetailElaboration = 6,
};

inline constexpr std::array<DialogueState, 7> kAllStates = {
    DialogueState::Idle,           DialogueState::FoodState,        DialogueState::StepGuide,
    DialogueState::ProblemSolving, DialogueState::GeneralVisual,    DialogueState::CorrectionReview,
    DialogueState::DetailElaboration,
};

enum class EventKind : std::uint8_t {
  FoodStateQuery = 1,
  StepQuery = 2,
  ProblemQuery = 3,
  GeneralVisualQuery = 4,
  MissedStepDetected = 5,
  IncorrectStepDetected = 6,
  FollowUpDetails = 7,
  FlagResponseWrong = 8,
  Reset = 9,
  MediaControl = 10,
};

inline constexpr std::array<EventKind, 10> kAllEvents = {
    EventKind::FoodStateQuery,     EventKind::StepQuery,          EventKind::ProblemQuery,
    EventKind::GeneralVisualQuery, EventKind::MissedStepDetected, EventKind::IncorrectStepDetected,
    EventKind::FollowUpDetails,    EventKind::FlagResponseWrong,  EventKind::Reset,
    EventKind::MediaControl,
};

enum class ResetReason : std::uint8_t { Satisfied, IdleTimeout };

// "S0".."S6" / "E1".."E10"
std::string_view code(DialogueState s) noexcept;
std::string_view code(EventKind e) noexcept;
std::string_view name(DialogueState s) noexcept;
std::string_view name(EventKind e) noexcept;
std::string_view to_string(ResetReason r) noexcept;

// Accept codes ("S2", "E10"); return nullopt otherwise.
std::optional<DialogueState> parse_state(std::string_view s) noexcept;
std::optional<EventKind> parse_event(std::string_view s) noexcept;

constexpr bool is_alert(EventKind e) {
  return e == EventKind::MissedStepDetected || e == EventKind::IncorrectStepDetected;
}
constexpr bool is_follow_up(EventKind e) {
  return e == EventKind::FollowUpDetails || e == EventKind::FlagResponseWrong;
}
constexpr bool is_top_level_query(EventKind e) {
  return e == EventKind::FoodStateQuery || e == EventKind::StepQuery || e == EventKind::ProblemQuery ||
         e == EventKind::GeneralVisualQuery;
}

// Payload rules: alerts carry a judgment id, resets carry a reason, every
// other event carries the id of the utterance that produced it.
struct InteractionEvent {
  EventKind kind = EventKind::GeneralVisualQuery;
  std::optional<std::uint64_t> utterance_id;
  std::optional<std::uint64_t> judgment_id;
  std::optional<ResetReason> reset_reason;

  static InteractionEvent from_utterance(EventKind kind, std::uint64_t utterance_id);
  static InteractionEvent from_judgment(EventKind kind, std::uint64_t judgment_id);
  static InteractionEvent reset(ResetReason reason, std::optional<std::uint64_t> utterance_id = std::nullopt);

  bool operator==(const InteractionEvent&) const = default;
};

}  // namespace mise
