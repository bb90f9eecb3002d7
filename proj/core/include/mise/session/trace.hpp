#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "mise/common/clock.hpp"
#include "mise/orchestrator/events.hpp"

namespace mise::session {

enum class StimulusKind : std::uint8_t { Utterance, Command, Tick, Alert, Idle, SkipDeclaration };

std::string_view to_string(StimulusKind k) noexcept;
std::optional<StimulusKind> parse_stimulus_kind(std::string_view s) noexcept;

// One record per dispatched stimulus.
struct TraceRecord {
  std::uint64_t seq = 0;
  StimulusKind stimulus = StimulusKind::Utterance;
  SessionTime at{0};
  std::optional<std::string> utterance;
  // Memory record of the utterance.
  std::optional<std::uint64_t> record_id;
  std::optional<EventKind> classified_event;
  DialogueState from_state = DialogueState::Idle;
  DialogueState to_state = DialogueState::Idle;
  bool rejected = false;
  std::optional<std::uint64_t> response_id;
  std::optional<std::string> response_text;
  std::optional<std::uint64_t> tick_id;
  std::optional<std::uint64_t> judgment_id;
  std::optional<std::size_t> step;
  bool tts_failed = false;
  // Error code name when the stimulus degraded (e.g. GenerationUnavailable).
  std::optional<std::string> error;
  // Set only by the annotation tool.
  std::optional<EventKind> ground_truth_event;
  std::optional<bool> response_correct;

  bool operator==(const TraceRecord&) const = default;

  bool is_query() const { return stimulus == StimulusKind::Utterance; }
};

nlohmann::json to_json(const TraceRecord& r);
TraceRecord trace_from_json(const nlohmann::json& j);
std::string trace_line(const TraceRecord& r);

// Line-delimited trace; blank lines ignored. Throws ParseError with the
// line number.
std::vector<TraceRecord> parse_trace(std::string_view text);
std::vector<TraceRecord> read_trace(const std::filesystem::path& path);
void write_trace(const std::vector<TraceRecord>& records, std::ostream& out);

struct Annotation {
  std::uint64_t seq = 0;
  EventKind ground_truth_event = EventKind::GeneralVisualQuery;
  bool response_correct = false;
};

// Labels file: one {"seq", "event", "correct"} object per line.
std::vector<Annotation> parse_annotations(std::string_view text);

// Applies labels to query records. Throws InvalidInput for a label whose
// seq is not a query record.
void annotate(std::vector<TraceRecord>& trace, const std::vector<Annotation>& labels);

}  // namespace mise::session
