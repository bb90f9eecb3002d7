#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "mise/knowledge/types.hpp"

namespace mise::knowledge {

// Ingredients and steps, either parsed from an outliner reply or loaded from
// a hand-authored override file.
struct RecipeOutline {
  std::vector<Ingredient> ingredients;
  std::vector<Step> steps;
};

nlohmann::json to_json(const RecipeKnowledge& k);
RecipeKnowledge from_json(const nlohmann::json& j);

// Canonical form: keys sorted, two-space indent, UTF-8, trailing newline.
// Identical knowledge always yields identical bytes.
std::string to_canonical_json(const RecipeKnowledge& k);

// Parses and validates. Throws SchemaViolation with a diagnostic.
RecipeKnowledge parse_knowledge(std::string_view text);
RecipeKnowledge load_knowledge(const std::filesystem::path& path);
void save_knowledge(const RecipeKnowledge& k, const std::filesystem::path& path);

// Transcript file: one JSON object per line, {"w": text, "s": start, "e": end}.
// An optional first line {"language": tag} sets the language.
TimedTranscript parse_transcript(std::string_view text);
TimedTranscript read_transcript(const std::filesystem::path& path);

// Frame manifest: one JSON object per line, {"t": seconds, "d": [descriptor...],
// "image": optional path}. Blank lines and lines starting with '#' are ignored.
std::vector<FrameRecord> parse_frame_manifest(std::string_view text);
std::vector<FrameRecord> read_frame_manifest(const std::filesystem::path& path);
std::string frame_manifest_line(const FrameRecord& frame);

// Outline lines:
//   step <first>-<last> <summary>
//   ingredient <first_mention> <name> | <quantity>
// Step indices are assigned in line order.
RecipeOutline parse_outline(std::string_view text);

// Override file: {"ingredients": [{name, quantity, first_mention}],
//                 "steps": [{summary, first_sentence, last_sentence}]}
RecipeOutline parse_outline_override(std::string_view json_text);

std::string warnings_jsonl(const std::vector<Warning>& warnings);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view bytes);

}  // namespace mise::knowledge
