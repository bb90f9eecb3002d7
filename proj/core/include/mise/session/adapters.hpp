#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "mise/monitor/monitor.hpp"
#include "mise/orchestrator/classifier.hpp"
#include "mise/orchestrator/response.hpp"
#include "mise/session/config.hpp"

namespace mise::session {

// Returns an opaque reference to the synthesized audio.
class TtsAdapter {
 public:
  virtual ~TtsAdapter() = default;
  virtual std::string synthesize(std::string_view text, double speed) = 0;
};

struct TtsCall {
  std::string text;
  double speed = 1.0;
};

class MockTts final : public TtsAdapter {
 public:
  std::string synthesize(std::string_view text, double speed) override;
  void fail(bool on) { fail_ = on; }
  const std::vector<TtsCall>& calls() const { return calls_; }

 private:
  std::vector<TtsCall> calls_;
  bool fail_ = false;
};

// Non-owning view handed to a session.
struct Adapters {
  EventClassifier& classifier;
  ResponseGenerator& generator;
  monitor::Perceiver& perceiver;
  monitor::JudgeAdapter& judge;
  TtsAdapter& tts;
};

// Owns one adapter per boundary, built from the config's choices.
struct AdapterSet {
  std::unique_ptr<EventClassifier> classifier;
  std::unique_ptr<ResponseGenerator> generator;
  std::unique_ptr<monitor::Perceiver> perceiver;
  std::unique_ptr<monitor::JudgeAdapter> judge;
  std::unique_ptr<TtsAdapter> tts;

  Adapters view() const { return {*classifier, *generator, *perceiver, *judge, *tts}; }
};

// mock_all forces every adapter to its deterministic mock: keyword
// classifier (config rules file when set), grounded generator, scripted
// perceiver, rule-based judge, recording TTS.
AdapterSet make_adapters(const SessionConfig& cfg, bool mock_all, const RemoteSettings& remote = RemoteSettings::from_env());

}  // namespace mise::session
