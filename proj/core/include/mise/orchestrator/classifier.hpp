#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mise/monitor/types.hpp"
#include "mise/orchestrator/events.hpp"

namespace mise {

struct ClassifyRequest {
  std::string_view utterance;
  DialogueState state = DialogueState::Idle;
  const monitor::Observation* latest_observation = nullptr;
};

struct Classification {
  EventKind kind = EventKind::GeneralVisualQuery;
  // The utterance declares a step as intentionally skipped.
  bool skip_declared = false;
  // Explicit step index when the utterance named one.
  std::optional<std::size_t> skip_step;
};

class EventClassifier {
 public:
  virtual ~EventClassifier() = default;
  virtual Classification classify(const ClassifyRequest& request) = 0;
};

enum class MatchMode : std::uint8_t { Prefix, Contains };

// A phrase matched on word boundaries of the normalized utterance (lowercase
// words, apostrophes dropped, single spaces).
struct KeywordRule {
  EventKind event = EventKind::GeneralVisualQuery;
  MatchMode mode = MatchMode::Contains;
  std::string phrase;

  bool operator==(const KeywordRule&) const = default;
};

// First matching rule wins; no match -> E4. Skip declarations ("skip",
// "skipping", "skipped") are reported alongside the event, which then
// defaults to E2 when no rule matches.
class KeywordClassifier final : public EventClassifier {
 public:
  KeywordClassifier() : rules_(standard_rules()) {}
  explicit KeywordClassifier(std::vector<KeywordRule> rules) : rules_(std::move(rules)) {}

  Classification classify(const ClassifyRequest& request) override;

  const std::vector<KeywordRule>& rules() const { return rules_; }

  static std::vector<KeywordRule> standard_rules();
  // Fixture format: "<event> <prefix|contains> <phrase words...>" per line,
  // '#' comments.
  static std::vector<KeywordRule> parse_rules(std::string_view text);
  static std::string rules_to_text(const std::vector<KeywordRule>& rules);

 private:
  std::vector<KeywordRule> rules_;
};

class FailingClassifier final : public EventClassifier {
 public:
  Classification classify(const ClassifyRequest&) override;
};

std::string normalize_utterance(std::string_view utterance);

// "step 3" / "step three" -> 2 (spoken step numbers are 1-based).
std::optional<std::size_t> spoken_step_index(std::string_view utterance);

struct ClassifiedEvent {
  InteractionEvent event;
  Classification classification;
};

// Utterance present: the classifier decides. Adapter failure, or an
// adapter answering E5/E6 for an utterance, throws
// ClassificationUnavailable. No utterance: the judgment decides (E5 before
// E6); throws EmptyInput when there is nothing to classify.
ClassifiedEvent classify_event(std::optional<std::string_view> utterance, std::uint64_t utterance_id,
                               const monitor::Observation* latest_observation, const monitor::Judgment* judgment,
                               DialogueState state, EventClassifier& classifier);

}  // namespace mise
