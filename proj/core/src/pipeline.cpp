#include "mise/knowledge/pipeline.hpp"

#include <algorithm>

#include "mise/common/error.hpp"

namespace mise::knowledge {

RecipeKnowledge compile_knowledge(std::vector<SentenceUnit> units, std::vector<Ingredient> ingredients,
                                  std::vector<Step> steps, const RecipeMeta& meta) {
  if (units.empty()) throw Error(ErrorCode::SchemaViolation, "a recipe must have at least one sentence");
  for (std::size_t i = 0; i < units.size(); ++i) units[i].index = i;
  for (std::size_t i = 0; i < steps.size(); ++i) steps[i].index = i;

  RecipeKnowledge k;
  k.recipe_id = meta.recipe_id;
  k.title = meta.title;
  k.video_duration = std::max(meta.video_duration, units.back().t_end);
  k.sentences = std::move(units);
  k.ingredients = std::move(ingredients);
  k.steps = std::move(steps);
  validate(k);
  return k;
}

DistillResult distill(const DistillInputs& inputs, const DistillOptions& options, Describers describers) {
  DistillResult result;
  auto sentences = segment_transcript(inputs.transcript, options.segment);

  if (inputs.frames.size() >= 2) {
    result.cuts = detect_scenes(inputs.frames, options.scene_threshold);
  } else {
    result.cuts.threshold = options.scene_threshold;
    result.warnings.push_back({std::nullopt, "scene_detection_skipped", "fewer than 2 frames in manifest"});
  }

  auto assigned = assign_keyframes(std::move(sentences), result.cuts, inputs.frames);
  sentences = std::move(assigned.sentences);
  result.warnings.insert(result.warnings.end(), assigned.warnings.begin(), assigned.warnings.end());

  for (auto& s : sentences) {
    if (!s.keyframes.empty()) {
      try {
        s.visual_description = describe_visual(s, describers.visual);
      } catch (const Error& e) {
        result.warnings.push_back({s.index, "visual_describer_failed", e.what()});
      }
    }
    if (inputs.audio) {
      const AudioWindow window{inputs.audio->window(s.t_start, s.t_end), inputs.audio->sample_rate, s.t_start,
                               s.t_end};
      try {
        s.audio_description = describe_audio(window, describers.audio);
      } catch (const Error& e) {
        result.warnings.push_back({s.index, "audio_describer_failed", e.what()});
      }
    }
  }

  RecipeOutline outline;
  if (inputs.outline_override) {
    outline = *inputs.outline_override;
  } else {
    try {
      outline = parse_outline(describers.outliner.outline(sentences));
    } catch (const std::exception& e) {
      result.warnings.push_back({std::nullopt, "outline_failed", e.what()});
    }
  }

  double duration = sentences.empty() ? 0.0 : sentences.back().t_end;
  if (!inputs.frames.empty()) duration = std::max(duration, inputs.frames.back().timestamp);
  if (inputs.audio) duration = std::max(duration, inputs.audio->duration());

  result.knowledge = compile_knowledge(std::move(sentences), std::move(outline.ingredients),
                                       std::move(outline.steps), {inputs.recipe_id, inputs.title, duration});
  return result;
}

}  // namespace mise::knowledge
