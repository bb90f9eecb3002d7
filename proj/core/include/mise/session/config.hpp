#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "mise/common/clock.hpp"
#include "mise/memory/context.hpp"
#include "mise/monitor/monitor.hpp"
#include "mise/orchestrator/response.hpp"

namespace mise::session {

// "mock" or "remote" per adapter; remote endpoints come from the environment.
struct AdapterChoice {
  std::string classifier = "mock";
  std::string generator = "mock";
  std::string perceiver = "mock";
  std::string judge = "mock";
  std::string tts = "mock";

  bool operator==(const AdapterChoice&) const = default;
};

struct SessionConfig {
  std::filesystem::path recipe;
  SessionTime tick_period = monitor::kDefaultTickPeriod;
  SessionTime idle_timeout = kDefaultIdleTimeout;
  double tts_speed = 1.0;
  AdapterChoice adapters;
  std::size_t context_budget = memory::kUnlimitedBudget;
  SessionTime alert_cooldown = monitor::kDefaultAlertCooldown;
  // Empty paths disable the corresponding file.
  std::filesystem::path trace_path;
  std::filesystem::path session_path;
  // Overrides for the built-in templates and classifier rules.
  std::filesystem::path templates_dir;
  std::filesystem::path classifier_rules;

  bool operator==(const SessionConfig&) const = default;
};

// Throws InvalidInput: tick_period > 0, idle_timeout > 0,
// tts_speed in [0.5, 3.0], adapter names "mock" or "remote".
void validate(const SessionConfig& cfg);

// Config file keys (all optional except recipe):
//   recipe, tick_period (s), idle_timeout (s), tts_speed, context_budget,
//   alert_cooldown (s), trace, session, templates, classifier_rules,
//   adapters: {classifier, generator, perceiver, judge, tts}
// Relative paths resolve against `base_dir`. Unknown keys are rejected.
SessionConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
SessionConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const SessionConfig& cfg);

// MISE_MODEL_URL, MISE_DESCRIBER_URL, MISE_API_KEY.
struct RemoteSettings {
  std::string model_url;
  std::string describer_url;
  std::string api_key;

  static RemoteSettings from_env();
};

}  // namespace mise::session
