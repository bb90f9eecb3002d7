#pragma once

#include <chrono>
#include <memory>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "mise/knowledge/describers.hpp"
#include "mise/monitor/monitor.hpp"
#include "mise/orchestrator/classifier.hpp"
#include "mise/orchestrator/response.hpp"
#include "mise/session/adapters.hpp"

namespace mise::session {

// Wire contract shared by every remote adapter:
//   POST <base>/v1/complete
//   Authorization: Bearer <key>          (when a key is set)
//   {"task": "<task>", "payload": {...}}
// The reply is {"text": "..."}. Transport errors, non-200 status and
// replies without "text" throw AdapterUnavailable. Plain http only.
class RemoteClient {
 public:
  explicit RemoteClient(std::string base_url, std::string api_key = {},
                        std::chrono::milliseconds timeout = std::chrono::seconds(30));
  ~RemoteClient();

  std::string complete(std::string_view task, const nlohmann::json& payload) const;
  const std::string& base_url() const { return base_url_; }

 private:
  std::string base_url_;
  std::string api_key_;
  std::chrono::milliseconds timeout_;
};

// task "classify": {utterance, state, observation?}; reply is an event code,
// optionally followed by "skip" and a 0-based step ("E2 skip 1").
class RemoteClassifier final : public EventClassifier {
 public:
  explicit RemoteClassifier(std::shared_ptr<const RemoteClient> client) : client_(std::move(client)) {}
  Classification classify(const ClassifyRequest& request) override;

 private:
  std::shared_ptr<const RemoteClient> client_;
};

// task "generate": {template, state, prompt}; reply is the response text.
class RemoteGenerator final : public ResponseGenerator {
 public:
  explicit RemoteGenerator(std::shared_ptr<const RemoteClient> client) : client_(std::move(client)) {}
  std::string generate(const GenerationRequest& request) override;

 private:
  std::shared_ptr<const RemoteClient> client_;
};

// task "perceive": {tick_id, from_ms, to_ms, frames: [{t, image}], prompt_tag,
// prompt}; reply in the observation line format.
class RemotePerceiver final : public monitor::Perceiver {
 public:
  explicit RemotePerceiver(std::shared_ptr<const RemoteClient> client) : client_(std::move(client)) {}
  std::string perceive(const monitor::PerceptionRequest& request) override;

 private:
  std::shared_ptr<const RemoteClient> client_;
};

// task "judge": {observation, steps, progress}; reply is a JSON object
// {relevant, correct?, missed_steps?, advanced_to?, matched_step?}.
class RemoteJudge final : public monitor::JudgeAdapter {
 public:
  explicit RemoteJudge(std::shared_ptr<const RemoteClient> client) : client_(std::move(client)) {}
  monitor::Judgment judge(const monitor::JudgeRequest& request) override;

 private:
  std::shared_ptr<const RemoteClient> client_;
};

// task "speak": {text, speed}; reply is an audio reference (URL or id).
class RemoteTts final : public TtsAdapter {
 public:
  explicit RemoteTts(std::shared_ptr<const RemoteClient> client) : client_(std::move(client)) {}
  std::string synthesize(std::string_view text, double speed) override;

 private:
  std::shared_ptr<const RemoteClient> client_;
};

// task "describe_visual": {sentence, text, keyframes: [{t, hash}]}.
class RemoteVisualDescriber final : public knowledge::VisualDescriber {
 public:
  explicit RemoteVisualDescriber(std::shared_ptr<const RemoteClient> client) : client_(std::move(client)) {}
  std::string describe(const knowledge::VisualRequest& request) override;

 private:
  std::shared_ptr<const RemoteClient> client_;
};

// task "describe_audio": {t_start, t_end, sample_rate, rms}.
class RemoteAudioDescriber final : public knowledge::AudioDescriber {
 public:
  explicit RemoteAudioDescriber(std::shared_ptr<const RemoteClient> client) : client_(std::move(client)) {}
  std::string describe(const knowledge::AudioWindow& window) override;

 private:
  std::shared_ptr<const RemoteClient> client_;
};

// task "outline": {sentences: [{index, text}]}; reply in the outline format.
class RemoteOutliner final : public knowledge::Outliner {
 public:
  explicit RemoteOutliner(std::shared_ptr<const RemoteClient> client) : client_(std::move(client)) {}
  std::string outline(std::span<const knowledge::SentenceUnit> sentences) override;

 private:
  std::shared_ptr<const RemoteClient> client_;
};

}  // namespace mise::session
