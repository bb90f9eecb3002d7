#include "mise/orchestrator/templates.hpp"

#include <regex>

#include "mise/common/error.hpp"
#include "mise/knowledge/io.hpp"

namespace mise {
namespace {

constexpr std::string_view kShared =
    "Recipe knowledge:\n{{knowledge}}\n"
    "Current step: {{focus_steps}}\n"
    "Recent conversation:\n{{recent_turns}}\n"
    "Latest observations of the kitchen:\n{{observations}}\n"
    "Related memory:\n{{retrieved}}\n";

TemplateSet build_standard() {
  TemplateSet set;
  const std::string shared(kShared);
  set.set(DialogueState::FoodState,
          {"S1.v1",
           "You are a cooking assistant for a blind cook. The user asks about the current condition of the food.\n"
           "Combine what the camera sees with what the user reports through touch, smell, taste and sound.\n"
           "Answer in one or two short sentences with only the critical facts.\n" +
               shared + "User: {{query}}\n"});
  set.set(DialogueState::StepGuide,
          {"S2.v1",
           "You are a cooking assistant for a blind cook. The user asks about a step of the recipe.\n"
           "Say what to do, how long it takes and how to perform it, grounded in the video recipe.\n"
           "Be concise and omit extraneous details.\n" +
               shared + "User: {{query}}\n"});
  set.set(DialogueState::ProblemSolving,
          {"S3.v1",
           "You are a cooking assistant for a blind cook. Help resolve a problem or a deviation from the recipe.\n"
           "When an alert is given, tell the user what was missed or done incorrectly and how to correct it.\n"
           "Be concise.\n"
           "Alert: {{alert}}\n" +
               shared + "User: {{query}}\n"});
  set.set(DialogueState::GeneralVisual,
          {"S4.v1",
           "You are a cooking assistant for a blind cook. Answer a general visual question about the kitchen or "
           "the recipe.\n"
           "Describe only what is relevant, in the spatial order the user asks for.\n" +
               shared + "User: {{query}}\n"});
  set.set(DialogueState::CorrectionReview,
          {"S5.v1",
           "You are a cooking assistant for a blind cook. The user says your previous answer was wrong.\n"
           "Pay special attention to the additional information the user provides and correct the answer.\n"
           "Be concise.\n" +
               shared + "User: {{query}}\n"});
  set.set(DialogueState::DetailElaboration,
          {"S6.v1",
           "You are a cooking assistant for a blind cook. The user wants more detail on your previous answer.\n"
           "Pay special attention to the additional information the user provides and elaborate on it.\n"
           "Stay concise.\n" +
               shared + "User: {{query}}\n"});
  return set;
}

}  // namespace

const TemplateSet& TemplateSet::standard() {
  static const TemplateSet set = build_standard();
  return set;
}

TemplateSet TemplateSet::load_dir(const std::filesystem::path& dir) {
  static const std::regex kName(R"((S[1-6])\.v([0-9]+)\.txt)");
  TemplateSet set;
  std::map<DialogueState, int> versions;
  std::error_code ec;
  for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
    std::smatch m;
    const auto fname = entry.path().filename().string();
    if (!std::regex_match(fname, m, kName)) continue;
    const auto state = *parse_state(m[1].str());
    const int version = std::stoi(m[2].str());
    if (versions.contains(state) && versions[state] >= version) continue;
    versions[state] = version;
    set.set(state, {m[1].str() + ".v" + m[2].str(), knowledge::read_file(entry.path())});
  }
  if (ec) throw Error(ErrorCode::IoError, "cannot read template directory " + dir.string());
  for (auto s : kAllStates) {
    if (s != DialogueState::Idle && !versions.contains(s)) {
      throw Error(ErrorCode::StartupFailure, "missing prompt template for " + std::string(code(s)));
    }
  }
  return set;
}

const PromptTemplate& TemplateSet::for_state(DialogueState state) const {
  auto it = by_state_.find(state);
  if (it == by_state_.end()) throw Error(ErrorCode::InvalidInput, "no template for " + std::string(code(state)));
  return it->second;
}

void TemplateSet::set(DialogueState state, PromptTemplate t) { by_state_[state] = std::move(t); }

std::string fill_template(std::string_view text, const std::map<std::string, std::string>& slots) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    const auto open = text.find("{{", i);
    if (open == std::string_view::npos) {
      out.append(text.substr(i));
      break;
    }
    const auto close = text.find("}}", open + 2);
    if (close == std::string_view::npos) {
      out.append(text.substr(i));
      break;
    }
    out.append(text.substr(i, open - i));
    const std::string key(text.substr(open + 2, close - open - 2));
    if (auto it = slots.find(key); it != slots.end()) out.append(it->second);
    i = close + 2;
  }
  return out;
}

}  // namespace mise
