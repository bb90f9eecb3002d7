#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "mise/orchestrator/events.hpp"

namespace mise {

// Total map (state, event) -> next state; nullopt marks a Rejected cell.
class TransitionTable {
 public:
  using Cell = std::optional<DialogueState>;

  // The built-in table:
  //   any state: E1->S1 E2->S2 E3->S3 E4->S4 E5->S3 E6->S3 E9->S0 E10->(same)
  //   S1..S6:    E7->S6 E8->S5
  //   S0:        E7, E8 rejected
  static const TransitionTable& standard();

  Cell lookup(DialogueState from, EventKind event) const;
  void set(DialogueState from, EventKind event, Cell to);

  std::size_t rejected_count() const;

  // Fixture format: a header row of event codes, then one row per state:
  //   state  E1  E2 ... E10
  //   S0     S1  S2 ... S0
  // with "-" for Rejected. Whitespace separated; '#' starts a comment.
  static TransitionTable parse(std::string_view text);
  std::string to_text() const;

  bool operator==(const TransitionTable&) const = default;

 private:
  std::array<std::array<Cell, 10>, 7> cells_{};
};

// Pure. E10 never changes state; Rejected leaves the state to the caller.
std::optional<DialogueState> transition(DialogueState from, EventKind event,
                                        const TransitionTable& table = TransitionTable::standard());

}  // namespace mise
