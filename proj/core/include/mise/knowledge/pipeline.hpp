#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mise/knowledge/audio.hpp"
#include "mise/knowledge/describers.hpp"
#include "mise/knowledge/io.hpp"
#include "mise/knowledge/scenes.hpp"
#include "mise/knowledge/transcript.hpp"
#include "mise/knowledge/types.hpp"

namespace mise::knowledge {

struct RecipeMeta {
  std::string recipe_id;
  std::string title;
  double video_duration = 0.0;
};

// Assembles and validates a RecipeKnowledge. Step and sentence indices are
// renumbered by position. Throws SchemaViolation on any dangling index or an
// empty sentence list.
RecipeKnowledge compile_knowledge(std::vector<SentenceUnit> units, std::vector<Ingredient> ingredients,
                                  std::vector<Step> steps, const RecipeMeta& meta);

struct DistillInputs {
  TimedTranscript transcript;
  std::vector<FrameRecord> frames;
  std::optional<AudioTrack> audio;
  std::string recipe_id;
  std::string title;
  // When present, replaces the outliner's ingredients and steps.
  std::optional<RecipeOutline> outline_override;
};

struct DistillOptions {
  SegmentOptions segment;
  double scene_threshold = kDefaultSceneThreshold;
};

struct Describers {
  VisualDescriber& visual;
  AudioDescriber& audio;
  Outliner& outliner;
};

struct DistillResult {
  RecipeKnowledge knowledge;
  SceneCutList cuts;
  std::vector<Warning> warnings;
};

// Transcript -> sentences -> scene cuts -> keyframes -> visual and audio
// descriptions -> outline -> compiled knowledge. Describer failures leave an
// empty description and a warning; only structural errors throw. Describer
// calls run in sentence order.
DistillResult distill(const DistillInputs& inputs, const DistillOptions& options, Describers describers);

}  // namespace mise::knowledge
