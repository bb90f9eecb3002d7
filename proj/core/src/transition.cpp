#include "mise/orchestrator/transition.hpp"

#include <sstream>
#include <vector>

#include "mise/common/error.hpp"
#include "mise/common/text.hpp"

namespace mise {
namespace {

std::size_t row(DialogueState s) { return static_cast<std::size_t>(s); }
std::size_t col(EventKind e) { return static_cast<std::size_t>(e) - 1; }

TransitionTable build_standard() {
  TransitionTable t;
  for (auto s : kAllStates) {
    t.set(s, EventKind::FoodStateQuery, DialogueState::FoodState);
    t.set(s, EventKind::StepQuery, DialogueState::StepGuide);
    t.set(s, EventKind::ProblemQuery, DialogueState::ProblemSolving);
    t.set(s, EventKind::GeneralVisualQuery, DialogueState::GeneralVisual);
    t.set(s, EventKind::MissedStepDetected, DialogueState::ProblemSolving);
    t.set(s, EventKind::IncorrectStepDetected, DialogueState::ProblemSolving);
    t.set(s, EventKind::Reset, DialogueState::Idle);
    t.set(s, EventKind::MediaControl, s);
    if (s == DialogueState::Idle) {
      t.set(s, EventKind::FollowUpDetails, std::nullopt);
      t.set(s, EventKind::FlagResponseWrong, std::nullopt);
    } else {
      t.set(s, EventKind::FollowUpDetails, DialogueState::DetailElaboration);
      t.set(s, EventKind::FlagResponseWrong, DialogueState::CorrectionReview);
    }
  }
  return t;
}

}  // namespace

const TransitionTable& TransitionTable::standard() {
  static const TransitionTable table = build_standard();
  return table;
}

TransitionTable::Cell TransitionTable::lookup(DialogueState from, EventKind event) const {
  return cells_[row(from)][col(event)];
}

void TransitionTable::set(DialogueState from, EventKind event, Cell to) { cells_[row(from)][col(event)] = to; }

std::size_t TransitionTable::rejected_count() const {
  std::size_t n = 0;
  for (const auto& r : cells_) {
    for (const auto& c : r) n += c ? 0 : 1;
  }
  return n;
}

TransitionTable TransitionTable::parse(std::string_view text) {
  TransitionTable t;
  std::vector<EventKind> header;
  std::array<bool, 7> seen{};
  std::size_t lineno = 0;
  for (const auto& raw : text::split(text, '\n')) {
    ++lineno;
    auto line = raw.substr(0, raw.find('#'));
    std::istringstream in(line);
    std::vector<std::string> fields;
    for (std::string f; in >> f;) fields.push_back(f);
    if (fields.empty()) continue;
    const auto where = "transition table line " + std::to_string(lineno);

    if (header.empty()) {
      for (std::size_t i = 1; i < fields.size(); ++i) {
        auto e = parse_event(fields[i]);
        if (!e) throw Error(ErrorCode::ParseError, where + ": unknown event '" + fields[i] + "'");
        header.push_back(*e);
      }
      if (header.size() != kAllEvents.size()) throw Error(ErrorCode::ParseError, where + ": need 10 event columns");
      continue;
    }

    auto from = parse_state(fields[0]);
    if (!from) throw Error(ErrorCode::ParseError, where + ": unknown state '" + fields[0] + "'");
    if (fields.size() != header.size() + 1) throw Error(ErrorCode::ParseError, where + ": wrong column count");
    for (std::size_t i = 0; i < header.size(); ++i) {
      const auto& f = fields[i + 1];
      if (f == "-") {
        t.set(*from, header[i], std::nullopt);
        continue;
      }
      auto to = parse_state(f);
      if (!to) throw Error(ErrorCode::ParseError, where + ": unknown state '" + f + "'");
      t.set(*from, header[i], *to);
    }
    seen[row(*from)] = true;
  }
  for (auto s : kAllStates) {
    if (!seen[row(s)]) throw Error(ErrorCode::ParseError, "transition table missing row " + std::string(code(s)));
  }
  return t;
}

std::string TransitionTable::to_text() const {
  std::ostringstream out;
  out << "state";
  for (auto e : kAllEvents) out << ' ' << code(e);
  out << '\n';
  for (auto s : kAllStates) {
    out << code(s);
    for (auto e : kAllEvents) {
      const auto c = lookup(s, e);
      out << ' ' << (c ? code(*c) : std::string_view("-"));
    }
    out << '\n';
  }
  return out.str();
}

std::optional<DialogueState> transition(DialogueState from, EventKind event, const TransitionTable& table) {
  if (event == EventKind::MediaControl) return from;
  return table.lookup(from, event);
}

}  // namespace mise
