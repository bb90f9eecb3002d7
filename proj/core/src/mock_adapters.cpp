#include "mise/session/adapters.hpp"

#include <stdexcept>

#include "mise/common/error.hpp"
#include "mise/knowledge/io.hpp"
#include "mise/session/remote.hpp"

namespace mise::session {

std::string MockTts::synthesize(std::string_view text, double speed) {
  if (fail_) throw std::runtime_error("tts offline");
  calls_.push_back({std::string(text), speed});
  return "mock-tts://" + std::to_string(calls_.size());
}

AdapterSet make_adapters(const SessionConfig& cfg, bool mock_all, const RemoteSettings& remote) {
  const auto& a = cfg.adapters;
  const bool any_remote = !mock_all && (a.classifier == "remote" || a.generator == "remote" ||
                                        a.perceiver == "remote" || a.judge == "remote" || a.tts == "remote");
  std::shared_ptr<const RemoteClient> client;
  if (any_remote) client = std::make_shared<RemoteClient>(remote.model_url, remote.api_key);
  auto use_remote = [&](const std::string& choice) { return !mock_all && choice == "remote"; };

  AdapterSet set;
  if (use_remote(a.classifier)) {
    set.classifier = std::make_unique<RemoteClassifier>(client);
  } else if (!cfg.classifier_rules.empty()) {
    set.classifier =
        std::make_unique<KeywordClassifier>(KeywordClassifier::parse_rules(knowledge::read_file(cfg.classifier_rules)));
  } else {
    set.classifier = std::make_unique<KeywordClassifier>();
  }
  if (use_remote(a.generator))
    set.generator = std::make_unique<RemoteGenerator>(client);
  else
    set.generator = std::make_unique<GroundedGenerator>();
  if (use_remote(a.perceiver))
    set.perceiver = std::make_unique<RemotePerceiver>(client);
  else
    set.perceiver = std::make_unique<monitor::ScriptedPerceiver>();
  if (use_remote(a.judge))
    set.judge = std::make_unique<RemoteJudge>(client);
  else
    set.judge = std::make_unique<monitor::RuleBasedJudge>();
  if (use_remote(a.tts))
    set.tts = std::make_unique<RemoteTts>(client);
  else
    set.tts = std::make_unique<MockTts>();
  return set;
}

}  // namespace mise::session
