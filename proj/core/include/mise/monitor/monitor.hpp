#pragma once

#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mise/common/clock.hpp"
#include "mise/knowledge/types.hpp"
#include "mise/monitor/types.hpp"
#include "mise/orchestrator/events.hpp"

namespace mise::monitor {

inline constexpr SessionTime kDefaultTickPeriod{2000};
inline constexpr SessionTime kDefaultAlertCooldown{30000};

// What the perceiver is asked to report about the scene.
inline constexpr std::string_view kObservePrompt =
    "Observe the kitchen scene and report, one per line:\n"
    "action: the specific cooking action being performed\n"
    "step: the corresponding recipe step number, or none\n"
    "items: the visible food items, ingredients and kitchenware, comma separated\n"
    "sounds: any identifiable cooking-related sounds, comma separated\n";

struct AudioWindowRef {
  SessionTime from{0};
  SessionTime to{0};
};

struct PerceptionRequest {
  std::uint64_t tick_id = 0;
  SessionTime from{0};
  SessionTime to{0};
  std::span<const knowledge::FrameRecord> frames;
  AudioWindowRef audio;
  std::string_view prompt_tag = "observe.v1";
  std::string_view prompt = kObservePrompt;
};

// Replies with text in the format parsed by parse_observation_reply().
class Perceiver {
 public:
  virtual ~Perceiver() = default;
  virtual std::string perceive(const PerceptionRequest& request) = 0;
};

struct JudgeRequest {
  const Observation& observation;
  const knowledge::RecipeKnowledge& knowledge;
  const ProgressState& progress;
};

class JudgeAdapter {
 public:
  virtual ~JudgeAdapter() = default;
  // judgment_id and tick_id are filled in by judge().
  virtual Judgment judge(const JudgeRequest& request) = 0;
};

// Reply format (keys case-insensitive, order free, unknown keys ignored):
//   action: stirring the pot
//   step: 2            (0-based step index, or "none")
//   items: pot, wooden spoon
//   sounds: bubbling
// Throws ParseError when the action line is missing or step is not a number.
Observation parse_observation_reply(std::string_view reply);
std::string format_observation_reply(const Observation& obs);

// Exactly one Observation per call. Perceiver failure or an unparsable reply
// yields a degraded sentinel observation.
Observation tick(std::uint64_t tick_id, SessionTime now, SessionTime previous_tick,
                 std::span<const knowledge::FrameRecord> frames, Perceiver& perceiver);

// Degraded observations and adapter failures produce a degraded,
// irrelevant judgment. The result is normalized: correct is cleared when
// not relevant, missed steps are sorted and unique.
Judgment judge(const Observation& obs, const knowledge::RecipeKnowledge& knowledge, const ProgressState& progress,
               JudgeAdapter& adapter, std::uint64_t judgment_id);

// Missed steps: every s < matched with s not completed, not skipped and not
// the current step.
std::vector<std::size_t> missed_steps_before(std::size_t matched, const ProgressState& progress);

// E5 when steps were missed, then E6 when relevant and incorrect. Degraded
// judgments emit nothing.
std::vector<EventKind> emit_alerts(const Judgment& j);

struct ProgressUpdate {
  ProgressState progress;
  bool rejected = false;
};

// Moves the pointer forward to advanced_to and completes the previous
// current step. A relevant, correct observation of an earlier step that is
// not yet completed completes it (a missed step done late). Out-of-range or
// backward targets are rejected and leave the pointer unchanged.
ProgressUpdate advance_progress(const Judgment& j, const ProgressState& progress, std::size_t step_count);

// Suppresses repeats of the same (kind, step) within the cooldown.
class AlertLimiter {
 public:
  explicit AlertLimiter(SessionTime cooldown = kDefaultAlertCooldown) : cooldown_(cooldown) {}

  bool admit(EventKind kind, std::size_t step, SessionTime now);

 private:
  SessionTime cooldown_;
  std::map<std::pair<EventKind, std::size_t>, SessionTime> last_;
};

// Step key an alert is rate-limited on.
std::size_t alert_step(EventKind kind, const Judgment& j);

// Tick k (1-based) fires at k * period.
class TickSchedule {
 public:
  explicit TickSchedule(SessionTime period = kDefaultTickPeriod);

  SessionTime period() const { return period_; }
  std::uint64_t ticks_done() const { return done_; }
  SessionTime next_due() const { return period_ * static_cast<std::int64_t>(done_ + 1); }
  SessionTime last_tick_time() const { return period_ * static_cast<std::int64_t>(done_); }
  // Marks the next tick fired and returns its id.
  std::uint64_t fire() { return ++done_; }

 private:
  SessionTime period_;
  std::uint64_t done_ = 0;
};

// ---- deterministic adapters ----

// Replies with whatever scene text was set last; before any scene it
// reports an idle kitchen. fail_ticks lists tick ids that raise.
class ScriptedPerceiver final : public Perceiver {
 public:
  void set_scene(std::string reply) { reply_ = std::move(reply); }
  void fail_on_tick(std::uint64_t tick_id) { fail_ticks_.push_back(tick_id); }
  void fail_always(bool on) { fail_always_ = on; }
  std::string perceive(const PerceptionRequest& request) override;

  std::size_t calls() const { return calls_; }

 private:
  std::string reply_ = "action: idle\nstep: none\nitems:\nsounds:\n";
  std::vector<std::uint64_t> fail_ticks_;
  bool fail_always_ = false;
  std::size_t calls_ = 0;
};

// relevant = matched step present and in range.
// correct = the action shares a content word with the step summary and
// carries no negation marker (not, without, instead, wrong, missing,
// forgot, forgotten, skipped).
// missed = missed_steps_before(matched).
// advanced_to = matched when it is ahead of the current step.
class RuleBasedJudge final : public JudgeAdapter {
 public:
  Judgment judge(const JudgeRequest& request) override;
};

class FailingJudge final : public JudgeAdapter {
 public:
  Judgment judge(const JudgeRequest&) override;
};

bool action_matches_step(std::string_view action, std::string_view step_summary);

}  // namespace mise::monitor
