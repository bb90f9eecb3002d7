#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace mise::knowledge {

struct Word {
  std::string text;
  double start = 0.0;
  double end = 0.0;

  bool operator==(const Word&) const = default;
};

struct TimedTranscript {
  std::vector<Word> words;
  std::string language = "en";
};

struct Keyframe {
  double timestamp = 0.0;
  std::string content_hash;

  bool operator==(const Keyframe&) const = default;
};

struct SentenceUnit {
  std::size_t index = 0;
  std::string text;
  double t_start = 0.0;
  double t_end = 0.0;
  std::vector<Keyframe> keyframes;
  std::string visual_description;
  std::string audio_description;

  bool operator==(const SentenceUnit&) const = default;
};

// One record of the frame manifest. The descriptor is a per-frame content
// signature (for example a coarse color histogram); decoding is upstream.
struct FrameRecord {
  double timestamp = 0.0;
  std::vector<double> descriptor;
  std::string image_path;

  bool operator==(const FrameRecord&) const = default;
};

struct SceneCutList {
  std::vector<double> cuts;
  double threshold = 0.0;
};

struct Ingredient {
  std::string name;
  std::string quantity;
  std::size_t first_mention = 0;

  bool operator==(const Ingredient&) const = default;
};

// Sentence range is inclusive on both ends.
struct Step {
  std::size_t index = 0;
  std::string summary;
  std::size_t first_sentence = 0;
  std::size_t last_sentence = 0;

  bool operator==(const Step&) const = default;
};

struct RecipeKnowledge {
  static constexpr int kSchemaVersion = 1;

  std::string recipe_id;
  std::string title;
  double video_duration = 0.0;
  std::vector<SentenceUnit> sentences;
  std::vector<Ingredient> ingredients;
  std::vector<Step> steps;
  int schema_version = kSchemaVersion;

  bool operator==(const RecipeKnowledge&) const = default;

  // Sentence indices [first, last] of a step; empty when out of range.
  std::vector<std::size_t> step_sentences(std::size_t step) const;
};

// Non-fatal pipeline diagnostics, written to the warnings sidecar.
struct Warning {
  std::optional<std::size_t> sentence;
  std::string code;
  std::string message;

  bool operator==(const Warning&) const = default;
};

// Throws Error(SchemaViolation) naming the first violated invariant.
void validate(const RecipeKnowledge& k);

}  // namespace mise::knowledge
