#include "mise/harness/scenario.hpp"

#include "mise/common/error.hpp"
#include "mise/knowledge/io.hpp"
#include "mise/monitor/monitor.hpp"
#include "mise/orchestrator/events.hpp"

namespace mise::harness {
namespace {

constexpr std::string_view kTimelineNames[] = {"utterance", "scene", "skip_declaration", "command"};
constexpr std::string_view kExpectNames[] = {"event", "state", "alert", "response_contains", "playback"};

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::ScriptError, where + ": " + what);
}

SessionTime seconds(const nlohmann::json& v, const std::string& where) {
  if (!v.is_number()) fail(where, "time must be a number of seconds");
  const double s = v.get<double>();
  if (s < 0) fail(where, "time must be >= 0");
  return from_seconds(s);
}

std::string scene_reply(const nlohmann::json& scene, const std::string& where) {
  if (scene.is_string()) return scene.get<std::string>();
  if (!scene.is_object()) fail(where, "scene must be a string or an object");
  monitor::Observation obs;
  obs.action = scene.value("action", std::string("idle"));
  if (scene.contains("step") && !scene["step"].is_null()) {
    if (!scene["step"].is_number_unsigned()) fail(where, "scene step must be a 0-based index");
    obs.matched_step = scene["step"].get<std::size_t>();
  }
  obs.visible_items = scene.value("items", std::vector<std::string>{});
  obs.sounds = scene.value("sounds", std::vector<std::string>{});
  return monitor::format_observation_reply(obs);
}

bool media_status_ok(const std::string& s) { return s == "stopped" || s == "playing" || s == "paused"; }

TimelineEntry parse_entry(const nlohmann::json& e, const std::string& where) {
  if (!e.is_object() || !e.contains("at")) fail(where, "entry needs \"at\"");
  TimelineEntry out;
  out.at = seconds(e["at"], where);
  int kinds = 0;
  if (e.contains("utterance")) {
    ++kinds;
    out.kind = TimelineKind::Utterance;
    if (!e["utterance"].is_string()) fail(where, "utterance must be a string");
    out.text = e["utterance"].get<std::string>();
  }
  if (e.contains("scene")) {
    ++kinds;
    out.kind = TimelineKind::Scene;
    const auto& s = e["scene"];
    if (s.is_object() && s.value("fail", false))
      out.perceiver_fails = true;
    else
      out.text = scene_reply(s, where);
  }
  if (e.contains("skip")) {
    ++kinds;
    out.kind = TimelineKind::SkipDeclaration;
    if (!e["skip"].is_number_unsigned()) fail(where, "skip must be a 0-based step index");
    out.step = e["skip"].get<std::size_t>();
  }
  if (e.contains("command")) {
    ++kinds;
    out.kind = TimelineKind::Command;
    if (!e["command"].is_string()) fail(where, "command must be a string");
    out.text = e["command"].get<std::string>();
  }
  if (kinds != 1) fail(where, "entry needs exactly one of utterance, scene, skip, command");
  return out;
}

Expectation parse_expectation(const nlohmann::json& e, const std::string& where) {
  if (!e.is_object() || !e.contains("by")) fail(where, "expectation needs \"by\"");
  Expectation out;
  out.by = seconds(e["by"], where);
  if (e.contains("after")) out.after = seconds(e["after"], where);
  if (out.after > out.by) fail(where, "after must not exceed by");
  out.negate = e.value("negate", false);
  int kinds = 0;
  for (int i = 0; i < 5; ++i) {
    const std::string key(kExpectNames[i]);
    if (!e.contains(key)) continue;
    ++kinds;
    out.kind = static_cast<ExpectKind>(i);
    if (!e[key].is_string()) fail(where, key + " must be a string");
    out.value = e[key].get<std::string>();
  }
  if (kinds != 1) fail(where, "expectation needs exactly one of event, state, alert, response_contains, playback");
  if ((out.kind == ExpectKind::Event || out.kind == ExpectKind::Alert) && !parse_event(out.value))
    fail(where, "unknown event " + out.value);
  if (out.kind == ExpectKind::Alert && !is_alert(*parse_event(out.value))) fail(where, "alerts are E5 or E6");
  if (out.kind == ExpectKind::State && !parse_state(out.value)) fail(where, "unknown state " + out.value);
  if (out.kind == ExpectKind::PlaybackStatus && !media_status_ok(out.value)) fail(where, "unknown playback status");
  return out;
}

}  // namespace

std::string_view to_string(TimelineKind k) noexcept { return kTimelineNames[static_cast<int>(k)]; }
std::string_view to_string(ExpectKind k) noexcept { return kExpectNames[static_cast<int>(k)]; }

std::string Expectation::describe() const {
  std::string out = std::string(negate ? "no " : "") + std::string(to_string(kind)) + " " + value;
  char buf[64];
  std::snprintf(buf, sizeof buf, " in [%.3f, %.3f] s", to_seconds(after), to_seconds(by));
  return out + buf;
}

ScenarioScript parse_scenario(const nlohmann::json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) fail("scenario", "must be a JSON object");
  ScenarioScript s;
  s.name = j.value("name", std::string());
  if (s.name.empty()) fail("scenario", "missing name");
  const auto where = "scenario " + s.name;
  if (!j.contains("recipe") || !j["recipe"].is_string()) fail(where, "missing recipe");
  s.recipe = base_dir / j["recipe"].get<std::string>();
  if (!std::filesystem::exists(s.recipe)) fail(where, "recipe not found: " + s.recipe.string());
  if (j.contains("config")) {
    if (!j["config"].is_object() || j["config"].contains("recipe")) fail(where, "config must be an object without recipe");
    s.config = j["config"];
  }

  SessionTime latest{0};
  if (j.contains("timeline")) {
    std::size_t i = 0;
    for (const auto& e : j["timeline"]) {
      auto entry = parse_entry(e, where + " timeline[" + std::to_string(i++) + "]");
      if (entry.at < latest) fail(where, "timeline is not sorted by time");
      latest = entry.at;
      s.timeline.push_back(std::move(entry));
    }
  }
  if (j.contains("expect")) {
    std::size_t i = 0;
    SessionTime last_by{0};
    for (const auto& e : j["expect"]) {
      auto x = parse_expectation(e, where + " expect[" + std::to_string(i++) + "]");
      if (x.by < last_by) fail(where, "expectations are not sorted by time");
      last_by = x.by;
      latest = std::max(latest, x.by);
      s.expectations.push_back(std::move(x));
    }
  }
  s.duration = j.contains("duration") ? seconds(j["duration"], where) : latest;
  if (s.duration < latest) fail(where, "duration ends before the last timeline entry or expectation");
  return s;
}

ScenarioScript load_scenario(const std::filesystem::path& path) {
  std::string text;
  try {
    text = knowledge::read_file(path);
  } catch (const Error& e) {
    fail(path.string(), e.what());
  }
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(path.string(), e.what());
  }
  return parse_scenario(j, path.parent_path());
}

}  // namespace mise::harness
