#pragma once

#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mise/knowledge/types.hpp"

namespace mise::knowledge {

struct VisualRequest {
  std::size_t sentence_index = 0;
  std::string_view sentence_text;
  std::span<const Keyframe> keyframes;
};

struct AudioWindow {
  std::span<const float> samples;
  int sample_rate = 0;
  double t_start = 0.0;
  double t_end = 0.0;
};

// Adapter boundaries to hosted multimodal models. Implementations throw on
// failure; callers translate that into DescriberUnavailable.
class VisualDescriber {
 public:
  virtual ~VisualDescriber() = default;
  virtual std::string describe(const VisualRequest& request) = 0;
};

class AudioDescriber {
 public:
  virtual ~AudioDescriber() = default;
  virtual std::string describe(const AudioWindow& window) = 0;
};

// Produces the ingredient/step outline from the full transcript in the
// line format read by parse_outline().
class Outliner {
 public:
  virtual ~Outliner() = default;
  virtual std::string outline(std::span<const SentenceUnit> sentences) = 0;
};

// The adapter is called once with every keyframe of the unit and the unit
// text. Throws EmptyInput when the unit has no keyframes and
// DescriberUnavailable when the adapter fails or returns nothing.
std::string describe_visual(const SentenceUnit& unit, VisualDescriber& describer);
std::string describe_audio(const AudioWindow& window, AudioDescriber& describer);

// ---- deterministic mocks ----

// "KF:<n> TXT:<text>"
class EchoVisualDescriber final : public VisualDescriber {
 public:
  std::string describe(const VisualRequest& request) override;
};

// Replies from a fixed table keyed by sentence text; unknown text gets
// "<fallback_prefix><text>".
class CannedVisualDescriber final : public VisualDescriber {
 public:
  explicit CannedVisualDescriber(std::map<std::string, std::string> replies,
                                 std::string fallback_prefix = "Scene: ")
      : replies_(std::move(replies)), fallback_prefix_(std::move(fallback_prefix)) {}
  std::string describe(const VisualRequest& request) override;

 private:
  std::map<std::string, std::string> replies_;
  std::string fallback_prefix_;
};

class FailingVisualDescriber final : public VisualDescriber {
 public:
  std::string describe(const VisualRequest&) override;
};

// Labels by RMS level: below silence_floor -> "silence", above loud_threshold
// -> loud_label, otherwise "ambient kitchen noise".
class RmsAudioDescriber final : public AudioDescriber {
 public:
  RmsAudioDescriber(double silence_floor = 0.01, double loud_threshold = 0.1, std::string loud_label = "sizzling")
      : silence_floor_(silence_floor), loud_threshold_(loud_threshold), loud_label_(std::move(loud_label)) {}
  std::string describe(const AudioWindow& window) override;

 private:
  double silence_floor_;
  double loud_threshold_;
  std::string loud_label_;
};

class FailingAudioDescriber final : public AudioDescriber {
 public:
  std::string describe(const AudioWindow&) override;
};

// One step per sentence, summary = sentence text without final punctuation.
class SentenceOutliner final : public Outliner {
 public:
  std::string outline(std::span<const SentenceUnit> sentences) override;
};

}  // namespace mise::knowledge
