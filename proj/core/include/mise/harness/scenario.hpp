#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "mise/common/clock.hpp"

namespace mise::harness {

enum class TimelineKind : std::uint8_t { Utterance, Scene, SkipDeclaration, Command };
enum class ExpectKind : std::uint8_t { Event, State, Alert, ResponseContains, PlaybackStatus };

std::string_view to_string(TimelineKind k) noexcept;
std::string_view to_string(ExpectKind k) noexcept;

struct TimelineEntry {
  SessionTime at{0};
  TimelineKind kind = TimelineKind::Utterance;
  // Utterance text, perceiver reply for a scene, or command name.
  std::string text;
  // Skip declarations only.
  std::size_t step = 0;
  // Scene only: the perceiver fails from now on.
  bool perceiver_fails = false;
};

// Passes when a matching record falls within [after, by]; negated
// expectations pass when none does.
struct Expectation {
  SessionTime after{0};
  SessionTime by{0};
  ExpectKind kind = ExpectKind::Event;
  std::string value;
  bool negate = false;

  std::string describe() const;
};

struct ScenarioScript {
  std::string name;
  std::filesystem::path recipe;
  // Session config overrides (same keys as the config file, minus recipe).
  nlohmann::json config = nlohmann::json::object();
  // The run ends here; defaults to the latest timeline or expectation time.
  SessionTime duration{0};
  std::vector<TimelineEntry> timeline;
  std::vector<Expectation> expectations;
};

// Scenario file (JSON):
//   {
//     "name": "missed-salt",
//     "recipe": "../recipes/pasta.json",          relative to the file
//     "config": {"idle_timeout": 30},              optional
//     "duration": 20,                              optional, seconds
//     "timeline": [
//       {"at": 1.0, "utterance": "What's my next step?"},
//       {"at": 3.5, "scene": {"action": "stirring pasta", "step": 2, "items": ["pot"], "sounds": ["bubbling"]}},
//       {"at": 3.5, "scene": "action: idle\nstep: none"},
//       {"at": 4.0, "scene": {"fail": true}},
//       {"at": 5.0, "skip": 1},
//       {"at": 6.0, "command": "pause"}
//     ],
//     "expect": [
//       {"by": 8, "alert": "E5"},
//       {"after": 2, "by": 8, "state": "S3"},
//       {"by": 8, "event": "E2"},
//       {"by": 8, "response_contains": "salt"},
//       {"by": 9, "playback": "paused"},
//       {"by": 30, "alert": "E5", "negate": true}
//     ]
//   }
// Scene steps are 0-based. Times must be non-decreasing. Throws ScriptError
// for malformed scripts or a recipe file that does not exist.
ScenarioScript parse_scenario(const nlohmann::json& j, const std::filesystem::path& base_dir);
ScenarioScript load_scenario(const std::filesystem::path& path);

}  // namespace mise::harness
