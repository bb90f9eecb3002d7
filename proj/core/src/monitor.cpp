#include "mise/monitor/monitor.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "mise/common/error.hpp"
#include "mise/common/text.hpp"

namespace mise::monitor {
namespace {

std::vector<std::string> split_list(std::string_view v) {
  std::vector<std::string> out;
  for (const auto& part : text::split(v, ',')) {
    auto t = text::trim(part);
    if (!t.empty()) out.push_back(std::move(t));
  }
  return out;
}

constexpr std::string_view kNegations[] = {"not", "without", "instead", "wrong", "missing",
                                           "forgot", "forgotten", "skipped", "no"};

}  // namespace

std::string Observation::summary() const {
  if (degraded) return "observation unavailable";
  std::string out = "action: " + (action.empty() ? std::string("none") : action);
  out += "; step: " + (matched_step ? std::to_string(*matched_step) : std::string("none"));
  out += "; items: " + text::join(visible_items, ", ");
  out += "; sounds: " + text::join(sounds, ", ");
  return out;
}

std::string Judgment::summary() const {
  std::ostringstream out;
  out << "relevant=" << (relevant ? "yes" : "no");
  if (correct) out << " correct=" << (*correct ? "yes" : "no");
  out << " missed=";
  for (std::size_t i = 0; i < missed_steps.size(); ++i) out << (i ? "," : "") << missed_steps[i];
  if (advanced_to) out << " advanced=" << *advanced_to;
  if (degraded) out << " degraded";
  return out.str();
}

Observation parse_observation_reply(std::string_view reply) {
  Observation obs;
  bool have_action = false;
  for (const auto& raw : text::split(reply, '\n')) {
    const auto colon = raw.find(':');
    if (colon == std::string::npos) continue;
    const auto key = text::lowercase(text::trim(raw.substr(0, colon)));
    const auto value = text::trim(raw.substr(colon + 1));
    if (key == "action") {
      obs.action = value;
      have_action = true;
    } else if (key == "step") {
      const auto v = text::lowercase(value);
      if (v.empty() || v == "none" || v == "null" || v == "-") continue;
      try {
        std::size_t used = 0;
        obs.matched_step = std::stoul(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
      } catch (const std::exception&) {
        throw Error(ErrorCode::ParseError, "observation step is not a number: '" + value + "'");
      }
    } else if (key == "items") {
      obs.visible_items = split_list(value);
    } else if (key == "sounds") {
      obs.sounds = split_list(value);
    }
  }
  if (!have_action) throw Error(ErrorCode::ParseError, "observation reply has no action line");
  obs.raw_descriptor = std::string(reply);
  return obs;
}

std::string format_observation_reply(const Observation& obs) {
  std::string out = "action: " + obs.action + "\n";
  out += "step: " + (obs.matched_step ? std::to_string(*obs.matched_step) : std::string("none")) + "\n";
  out += "items: " + text::join(obs.visible_items, ", ") + "\n";
  out += "sounds: " + text::join(obs.sounds, ", ") + "\n";
  return out;
}

Observation tick(std::uint64_t tick_id, SessionTime now, SessionTime previous_tick,
                 std::span<const knowledge::FrameRecord> frames, Perceiver& perceiver) {
  PerceptionRequest req;
  req.tick_id = tick_id;
  req.from = previous_tick;
  req.to = now;
  req.frames = frames;
  req.audio = {previous_tick, now};

  Observation obs;
  try {
    obs = parse_observation_reply(perceiver.perceive(req));
  } catch (const std::exception&) {
    obs = Observation{};
    obs.degraded = true;
  }
  obs.tick_id = tick_id;
  obs.timestamp = now;
  return obs;
}

std::vector<std::size_t> missed_steps_before(std::size_t matched, const ProgressState& progress) {
  std::vector<std::size_t> out;
  for (std::size_t s = 0; s < matched; ++s) {
    if (s == progress.current_step) continue;
    if (progress.completed_steps.contains(s) || progress.skipped_steps.contains(s)) continue;
    out.push_back(s);
  }
  return out;
}

Judgment judge(const Observation& obs, const knowledge::RecipeKnowledge& knowledge, const ProgressState& progress,
               JudgeAdapter& adapter, std::uint64_t judgment_id) {
  Judgment j;
  if (obs.degraded) {
    j.degraded = true;
  } else {
    try {
      j = adapter.judge({obs, knowledge, progress});
    } catch (const std::exception&) {
      j = Judgment{};
      j.degraded = true;
    }
  }
  j.judgment_id = judgment_id;
  j.tick_id = obs.tick_id;
  if (j.degraded) {
    j.relevant = false;
    j.missed_steps.clear();
    j.advanced_to.reset();
  }
  if (!j.relevant) j.correct.reset();
  std::sort(j.missed_steps.begin(), j.missed_steps.end());
  j.missed_steps.erase(std::unique(j.missed_steps.begin(), j.missed_steps.end()), j.missed_steps.end());
  return j;
}

std::vector<EventKind> emit_alerts(const Judgment& j) {
  std::vector<EventKind> out;
  if (j.degraded) return out;
  if (!j.missed_steps.empty()) out.push_back(EventKind::MissedStepDetected);
  if (j.relevant && j.correct == false) out.push_back(EventKind::IncorrectStepDetected);
  return out;
}

ProgressUpdate advance_progress(const Judgment& j, const ProgressState& progress, std::size_t step_count) {
  ProgressState next = progress;
  if (j.relevant && j.correct == true && j.matched_step && *j.matched_step < progress.current_step &&
      *j.matched_step < step_count)
    next.completed_steps.insert(*j.matched_step);
  if (!j.advanced_to) return {std::move(next), false};
  const auto target = *j.advanced_to;
  if (target >= step_count || target <= progress.current_step) return {std::move(next), true};
  next.completed_steps.insert(progress.current_step);
  next.completed_steps.erase(target);
  next.current_step = target;
  return {std::move(next), false};
}

bool AlertLimiter::admit(EventKind kind, std::size_t step, SessionTime now) {
  const auto key = std::make_pair(kind, step);
  if (auto it = last_.find(key); it != last_.end() && now - it->second < cooldown_) return false;
  last_[key] = now;
  return true;
}

std::size_t alert_step(EventKind kind, const Judgment& j) {
  if (kind == EventKind::MissedStepDetected && !j.missed_steps.empty()) return j.missed_steps.front();
  return j.matched_step.value_or(0);
}

TickSchedule::TickSchedule(SessionTime period) : period_(period) {
  if (period_.count() <= 0) throw Error(ErrorCode::InvalidInput, "tick period must be > 0");
}

std::string ScriptedPerceiver::perceive(const PerceptionRequest& request) {
  ++calls_;
  if (fail_always_ || std::find(fail_ticks_.begin(), fail_ticks_.end(), request.tick_id) != fail_ticks_.end()) {
    throw std::runtime_error("perceiver unavailable");
  }
  return reply_;
}

bool action_matches_step(std::string_view action, std::string_view step_summary) {
  const auto words = text::words(action);
  for (const auto& w : words) {
    if (std::find(std::begin(kNegations), std::end(kNegations), w) != std::end(kNegations)) return false;
  }
  return text::shared_token_count(text::content_token_set(action), text::content_token_set(step_summary)) > 0;
}

Judgment RuleBasedJudge::judge(const JudgeRequest& request) {
  const auto& obs = request.observation;
  const auto& steps = request.knowledge.steps;
  Judgment j;
  j.matched_step = obs.matched_step;
  if (!obs.matched_step || *obs.matched_step >= steps.size()) return j;
  const auto matched = *obs.matched_step;
  j.relevant = true;
  j.correct = action_matches_step(obs.action, steps[matched].summary);
  j.missed_steps = missed_steps_before(matched, request.progress);
  if (matched > request.progress.current_step) j.advanced_to = matched;
  return j;
}

Judgment FailingJudge::judge(const JudgeRequest&) { throw std::runtime_error("judge unavailable"); }

}  // namespace mise::monitor
