#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "mise/knowledge/types.hpp"
#include "mise/memory/store.hpp"
#include "mise/monitor/types.hpp"
#include "mise/orchestrator/events.hpp"

namespace mise::memory {

inline constexpr std::size_t kUnlimitedBudget = std::numeric_limits<std::size_t>::max();

struct ContextOptions {
  std::size_t recent_turns = 6;
  std::size_t recent_observations = 3;
  std::size_t retrieve_k = 5;
};

struct ContextRequest {
  DialogueState state = DialogueState::Idle;
  EventKind trigger = EventKind::GeneralVisualQuery;
  std::optional<std::string> query;
  // The memory record of the query itself, kept out of recent_turns.
  std::optional<std::uint64_t> query_record_id;
  monitor::ProgressState progress;
  std::optional<monitor::Judgment> judgment;
  // Whitespace tokens.
  std::size_t budget = kUnlimitedBudget;
};

struct ContextBundle {
  DialogueState state = DialogueState::Idle;
  EventKind trigger = EventKind::GeneralVisualQuery;
  std::optional<std::string> user_query;
  std::vector<MemoryRecord> recent_turns;
  std::vector<MemoryRecord> recent_observations;
  std::vector<MemoryRecord> retrieved;
  std::vector<knowledge::SentenceUnit> knowledge_slices;
  // Steps owning at least one included slice, in step order.
  std::vector<knowledge::Step> focus_steps;
  std::optional<monitor::Judgment> judgment;
  std::size_t budget_used = 0;

  std::vector<std::uint64_t> source_ids() const;
};

// Sentence indices the state asks for, in priority order:
//   S2: current and next step; S1, S3, S5, S6: current step (for E5 the
//   missed steps come first); S4: first sentence of every step.
std::vector<std::size_t> slice_sentences(DialogueState state, EventKind trigger,
                                         const knowledge::RecipeKnowledge& knowledge,
                                         const monitor::ProgressState& progress,
                                         const std::optional<monitor::Judgment>& judgment);

std::size_t token_cost(const MemoryRecord& r);
std::size_t token_cost(const knowledge::SentenceUnit& s);

// Fills the bundle in priority order (query, recent turns newest first,
// recent observations newest first, retrieved records, knowledge slices)
// and stops at the first item that does not fit, so a larger budget always
// yields a superset. Throws BudgetTooSmall when the query alone exceeds the
// budget.
class ContextAssembler {
 public:
  ContextAssembler(const MemoryStore& store, const knowledge::RecipeKnowledge& knowledge,
                   const RecordScorer& scorer, ContextOptions options = {})
      : store_(store), knowledge_(knowledge), scorer_(scorer), options_(options) {}

  ContextBundle assemble(const ContextRequest& request) const;

 private:
  const MemoryStore& store_;
  const knowledge::RecipeKnowledge& knowledge_;
  const RecordScorer& scorer_;
  ContextOptions options_;
};

}  // namespace mise::memory
