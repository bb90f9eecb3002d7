#include "mise/knowledge/describers.hpp"

#include <stdexcept>

#include "mise/common/error.hpp"
#include "mise/common/text.hpp"
#include "mise/knowledge/audio.hpp"

namespace mise::knowledge {

std::string describe_visual(const SentenceUnit& unit, VisualDescriber& describer) {
  if (unit.keyframes.empty()) {
    throw Error(ErrorCode::EmptyInput, "sentence " + std::to_string(unit.index) + " has no keyframes");
  }
  std::string reply;
  try {
    reply = describer.describe({unit.index, unit.text, unit.keyframes});
  } catch (const std::exception& e) {
    throw Error(ErrorCode::DescriberUnavailable, e.what());
  }
  if (text::trim(reply).empty()) throw Error(ErrorCode::DescriberUnavailable, "empty visual description");
  return reply;
}

std::string describe_audio(const AudioWindow& window, AudioDescriber& describer) {
  std::string reply;
  try {
    reply = describer.describe(window);
  } catch (const std::exception& e) {
    throw Error(ErrorCode::DescriberUnavailable, e.what());
  }
  if (text::trim(reply).empty()) throw Error(ErrorCode::DescriberUnavailable, "empty audio description");
  return reply;
}

std::string EchoVisualDescriber::describe(const VisualRequest& request) {
  return "KF:" + std::to_string(request.keyframes.size()) + " TXT:" + std::string(request.sentence_text);
}

std::string CannedVisualDescriber::describe(const VisualRequest& request) {
  const std::string key(request.sentence_text);
  if (auto it = replies_.find(key); it != replies_.end()) return it->second;
  return fallback_prefix_ + key;
}

std::string FailingVisualDescriber::describe(const VisualRequest&) {
  throw std::runtime_error("visual describer offline");
}

std::string RmsAudioDescriber::describe(const AudioWindow& window) {
  const double level = rms(window.samples);
  if (level < silence_floor_) return "silence";
  if (level > loud_threshold_) return loud_label_;
  return "ambient kitchen noise";
}

std::string FailingAudioDescriber::describe(const AudioWindow&) {
  throw std::runtime_error("audio describer offline");
}

std::string SentenceOutliner::outline(std::span<const SentenceUnit> sentences) {
  std::string out;
  for (const auto& s : sentences) {
    auto summary = s.text;
    while (!summary.empty() && (summary.back() == '.' || summary.back() == '!' || summary.back() == '?')) {
      summary.pop_back();
    }
    out += "step " + std::to_string(s.index) + "-" + std::to_string(s.index) + " " + summary + "\n";
  }
  return out;
}

}  // namespace mise::knowledge
