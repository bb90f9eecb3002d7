#include "mise/memory/context.hpp"

#include <algorithm>
#include <set>

#include "mise/common/error.hpp"
#include "mise/common/text.hpp"

namespace mise::memory {
namespace {

void append_unique(std::vector<std::size_t>& out, const std::vector<std::size_t>& more) {
  for (auto i : more) {
    if (std::find(out.begin(), out.end(), i) == out.end()) out.push_back(i);
  }
}

bool by_id(const MemoryRecord& a, const MemoryRecord& b) { return a.record_id < b.record_id; }

}  // namespace

std::vector<std::uint64_t> ContextBundle::source_ids() const {
  std::vector<std::uint64_t> ids;
  for (const auto* group : {&recent_turns, &recent_observations, &retrieved}) {
    for (const auto& r : *group) ids.push_back(r.record_id);
  }
  return ids;
}

std::vector<std::size_t> slice_sentences(DialogueState state, EventKind trigger,
                                         const knowledge::RecipeKnowledge& knowledge,
                                         const monitor::ProgressState& progress,
                                         const std::optional<monitor::Judgment>& judgment) {
  std::vector<std::size_t> out;
  const auto current = progress.current_step;
  switch (state) {
    case DialogueState::Idle:
      break;
    case DialogueState::StepGuide:
      append_unique(out, knowledge.step_sentences(current));
      append_unique(out, knowledge.step_sentences(current + 1));
      break;
    case DialogueState::GeneralVisual:
      for (const auto& s : knowledge.steps) append_unique(out, {s.first_sentence});
      break;
    case DialogueState::ProblemSolving:
      if (trigger == EventKind::MissedStepDetected && judgment) {
        for (auto m : judgment->missed_steps) append_unique(out, knowledge.step_sentences(m));
      }
      if (trigger == EventKind::IncorrectStepDetected && judgment && judgment->matched_step) {
        append_unique(out, knowledge.step_sentences(*judgment->matched_step));
      }
      append_unique(out, knowledge.step_sentences(current));
      break;
    case DialogueState::FoodState:
    case DialogueState::CorrectionReview:
    case DialogueState::DetailElaboration:
      append_unique(out, knowledge.step_sentences(current));
      break;
  }
  // Recipes without a step outline fall back to the opening sentence.
  if (out.empty() && state != DialogueState::Idle && !knowledge.sentences.empty()) out.push_back(0);
  return out;
}

std::size_t token_cost(const MemoryRecord& r) { return text::whitespace_token_count(r.text); }

std::size_t token_cost(const knowledge::SentenceUnit& s) {
  return text::whitespace_token_count(s.text) + text::whitespace_token_count(s.visual_description) +
         text::whitespace_token_count(s.audio_description);
}

ContextBundle ContextAssembler::assemble(const ContextRequest& request) const {
  ContextBundle bundle;
  bundle.state = request.state;
  bundle.trigger = request.trigger;
  bundle.judgment = request.judgment;

  std::size_t used = 0;
  const auto budget = request.budget;
  bool open = true;
  auto fits = [&](std::size_t cost) {
    if (!open) return false;
    if (cost > budget - used) {
      open = false;
      return false;
    }
    used += cost;
    return true;
  };

  if (request.query) {
    const auto cost = text::whitespace_token_count(*request.query);
    if (cost > budget) {
      throw Error(ErrorCode::BudgetTooSmall, "query needs " + std::to_string(cost) + " tokens, budget is " +
                                                 std::to_string(budget));
    }
    used += cost;
    bundle.user_query = request.query;
  }

  std::set<std::uint64_t> included;
  if (request.query_record_id) included.insert(*request.query_record_id);

  auto turns = store_.latest({RecordKind::Utterance, RecordKind::Response}, options_.recent_turns + 1);
  std::erase_if(turns, [&](const MemoryRecord& r) { return included.contains(r.record_id); });
  if (turns.size() > options_.recent_turns) turns.erase(turns.begin());
  for (auto it = turns.rbegin(); it != turns.rend(); ++it) {
    if (!fits(token_cost(*it))) break;
    bundle.recent_turns.push_back(*it);
    included.insert(it->record_id);
  }

  const auto observations = store_.latest({RecordKind::Observation}, options_.recent_observations);
  for (auto it = observations.rbegin(); it != observations.rend(); ++it) {
    if (!fits(token_cost(*it))) break;
    bundle.recent_observations.push_back(*it);
    included.insert(it->record_id);
  }

  if (request.query && options_.retrieve_k > 0) {
    // Over-fetch so records already in the recent classes can be skipped.
    const auto candidates = retrieve(store_, *request.query, options_.retrieve_k + included.size(), scorer_);
    for (const auto& r : candidates) {
      if (bundle.retrieved.size() == options_.retrieve_k) break;
      if (included.contains(r.record_id)) continue;
      if (!fits(token_cost(r))) break;
      bundle.retrieved.push_back(r);
      included.insert(r.record_id);
    }
  }

  for (auto idx : slice_sentences(request.state, request.trigger, knowledge_, request.progress, request.judgment)) {
    if (idx >= knowledge_.sentences.size()) continue;
    if (!fits(token_cost(knowledge_.sentences[idx]))) break;
    bundle.knowledge_slices.push_back(knowledge_.sentences[idx]);
  }
  for (const auto& step : knowledge_.steps) {
    const bool owns = std::any_of(bundle.knowledge_slices.begin(), bundle.knowledge_slices.end(), [&](const auto& s) {
      return s.index >= step.first_sentence && s.index <= step.last_sentence;
    });
    if (owns) bundle.focus_steps.push_back(step);
  }

  std::sort(bundle.recent_turns.begin(), bundle.recent_turns.end(), by_id);
  std::sort(bundle.recent_observations.begin(), bundle.recent_observations.end(), by_id);
  bundle.budget_used = used;
  return bundle;
}

}  // namespace mise::memory
