#include "mise/session/config.hpp"

#include <cstdlib>
#include <set>

#include "mise/common/error.hpp"
#include "mise/knowledge/io.hpp"

namespace mise::session {
namespace {

bool valid_adapter(const std::string& s) { return s == "mock" || s == "remote"; }

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  if (path.empty() || path.is_absolute() || base.empty()) return path;
  return base / path;
}

SessionTime seconds_field(const nlohmann::json& j, const char* key, SessionTime fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) throw Error(ErrorCode::InvalidInput, std::string(key) + " must be a number of seconds");
  return from_seconds(j.at(key).get<double>());
}

std::string env(const char* name) {
  const char* v = std::getenv(name);
  return v ? std::string(v) : std::string();
}

}  // namespace

void validate(const SessionConfig& cfg) {
  if (cfg.tick_period <= SessionTime{0}) throw Error(ErrorCode::InvalidInput, "tick_period must be > 0");
  if (cfg.idle_timeout <= SessionTime{0}) throw Error(ErrorCode::InvalidInput, "idle_timeout must be > 0");
  if (!(cfg.tts_speed >= 0.5 && cfg.tts_speed <= 3.0))
    throw Error(ErrorCode::InvalidInput, "tts_speed must be within [0.5, 3.0]");
  if (cfg.alert_cooldown < SessionTime{0}) throw Error(ErrorCode::InvalidInput, "alert_cooldown must be >= 0");
  if (cfg.context_budget == 0) throw Error(ErrorCode::InvalidInput, "context_budget must be > 0");
  const auto& a = cfg.adapters;
  for (const auto* s : {&a.classifier, &a.generator, &a.perceiver, &a.judge, &a.tts})
    if (!valid_adapter(*s)) throw Error(ErrorCode::InvalidInput, "adapter must be \"mock\" or \"remote\", got \"" + *s + "\"");
}

SessionConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir) {
  static const std::set<std::string> kKeys = {"recipe",         "tick_period", "idle_timeout", "tts_speed",
                                              "context_budget", "alert_cooldown", "trace",      "session",
                                              "templates",      "classifier_rules", "adapters"};
  if (!j.is_object()) throw Error(ErrorCode::InvalidInput, "config must be a JSON object");
  for (const auto& [k, _] : j.items())
    if (!kKeys.contains(k)) throw Error(ErrorCode::InvalidInput, "unknown config key: " + k);

  SessionConfig cfg;
  try {
    if (j.contains("recipe")) cfg.recipe = resolve(base_dir, j.at("recipe").get<std::string>());
    cfg.tick_period = seconds_field(j, "tick_period", cfg.tick_period);
    cfg.idle_timeout = seconds_field(j, "idle_timeout", cfg.idle_timeout);
    cfg.alert_cooldown = seconds_field(j, "alert_cooldown", cfg.alert_cooldown);
    cfg.tts_speed = j.value("tts_speed", cfg.tts_speed);
    if (j.contains("context_budget") && !j.at("context_budget").is_null())
      cfg.context_budget = j.at("context_budget").get<std::size_t>();
    if (j.contains("trace")) cfg.trace_path = resolve(base_dir, j.at("trace").get<std::string>());
    if (j.contains("session")) cfg.session_path = resolve(base_dir, j.at("session").get<std::string>());
    if (j.contains("templates")) cfg.templates_dir = resolve(base_dir, j.at("templates").get<std::string>());
    if (j.contains("classifier_rules"))
      cfg.classifier_rules = resolve(base_dir, j.at("classifier_rules").get<std::string>());
    if (j.contains("adapters")) {
      const auto& a = j.at("adapters");
      for (const auto& [k, _] : a.items()) {
        if (k != "classifier" && k != "generator" && k != "perceiver" && k != "judge" && k != "tts")
          throw Error(ErrorCode::InvalidInput, "unknown adapter: " + k);
      }
      cfg.adapters.classifier = a.value("classifier", cfg.adapters.classifier);
      cfg.adapters.generator = a.value("generator", cfg.adapters.generator);
      cfg.adapters.perceiver = a.value("perceiver", cfg.adapters.perceiver);
      cfg.adapters.judge = a.value("judge", cfg.adapters.judge);
      cfg.adapters.tts = a.value("tts", cfg.adapters.tts);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidInput, std::string("config: ") + e.what());
  }
  validate(cfg);
  return cfg;
}

SessionConfig load_config(const std::filesystem::path& path) {
  const auto text = knowledge::read_file(path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
  return parse_config(j, path.parent_path());
}

nlohmann::json to_json(const SessionConfig& cfg) {
  nlohmann::json j = {
      {"recipe", cfg.recipe.string()},
      {"tick_period", to_seconds(cfg.tick_period)},
      {"idle_timeout", to_seconds(cfg.idle_timeout)},
      {"alert_cooldown", to_seconds(cfg.alert_cooldown)},
      {"tts_speed", cfg.tts_speed},
      {"adapters",
       {{"classifier", cfg.adapters.classifier},
        {"generator", cfg.adapters.generator},
        {"perceiver", cfg.adapters.perceiver},
        {"judge", cfg.adapters.judge},
        {"tts", cfg.adapters.tts}}},
  };
  if (cfg.context_budget != memory::kUnlimitedBudget) j["context_budget"] = cfg.context_budget;
  if (!cfg.trace_path.empty()) j["trace"] = cfg.trace_path.string();
  if (!cfg.session_path.empty()) j["session"] = cfg.session_path.string();
  if (!cfg.templates_dir.empty()) j["templates"] = cfg.templates_dir.string();
  if (!cfg.classifier_rules.empty()) j["classifier_rules"] = cfg.classifier_rules.string();
  return j;
}

RemoteSettings RemoteSettings::from_env() {
  return {env("MISE_MODEL_URL"), env("MISE_DESCRIBER_URL"), env("MISE_API_KEY")};
}

}  // namespace mise::session
