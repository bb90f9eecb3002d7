#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "mise/orchestrator/events.hpp"

namespace mise {

struct PromptTemplate {
  // "<state code>.v<version>", e.g. "S2.v1".
  std::string id;
  std::string text;

  bool operator==(const PromptTemplate&) const = default;
};

// One template per responding state S1..S6. Placeholders are {{name}};
// unknown names render empty.
class TemplateSet {
 public:
  static const TemplateSet& standard();

  // Reads "<state>.v<n>.txt" files; the highest version per state wins.
  // Every state S1..S6 must be present.
  static TemplateSet load_dir(const std::filesystem::path& dir);

  const PromptTemplate& for_state(DialogueState state) const;
  void set(DialogueState state, PromptTemplate t);

  bool operator==(const TemplateSet&) const = default;

 private:
  std::map<DialogueState, PromptTemplate> by_state_;
};

std::string fill_template(std::string_view text, const std::map<std::string, std::string>& slots);

}  // namespace mise
