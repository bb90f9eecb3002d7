#include "mise/orchestrator/classifier.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "mise/common/error.hpp"
#include "mise/common/text.hpp"

namespace mise {
namespace {

constexpr std::string_view kStandardRules = R"(# Keyword event rules, version 1. First match wins; default E4.
E10 prefix pause
E10 prefix resume
E10 prefix stop
E10 prefix replay
E10 prefix play
E10 prefix keep playing
E10 contains play the video
E10 contains replay the
E10 contains pause the video
E10 contains stop the video
E9 contains thank you
E9 contains thanks
E9 contains got it
E9 contains thats all
E9 contains all good
E9 contains never mind
E8 contains thats wrong
E8 contains that is wrong
E8 contains youre wrong
E8 contains you are wrong
E8 contains not right
E8 contains incorrect
E8 contains thats not what
E8 contains mistake
E7 contains tell me more
E7 contains more detail
E7 contains explain more
E7 contains elaborate
E7 contains what do you mean
E7 contains is this correct
E7 contains like this
E7 contains go on
E1 contains cooked
E1 contains done yet
E1 contains is it done
E1 contains ready
E1 contains burnt
E1 contains burning
E1 contains brown
E1 contains temperature
E1 contains texture
E1 contains smell
E1 contains taste
E1 contains crispy
E1 contains melted
E1 contains boiling
E1 contains thick enough
E1 contains golden
E3 contains problem
E3 contains help
E3 contains fix
E3 contains stuck
E3 contains spilled
E3 contains too salty
E3 contains too much
E3 contains went wrong
E3 contains what do i do if
E3 contains cant
E3 contains dropped
E2 contains next
E2 contains step
E2 contains what should i do
E2 contains how do i
E2 contains how long
E2 contains how much
E2 contains how many
E2 contains ingredients
E2 contains already
E2 contains what do i need
E4 contains see
E4 contains look
E4 contains where
E4 contains is this
E4 contains describe
E4 contains in front of me
)";

constexpr std::pair<std::string_view, std::size_t> kNumberWords[] = {
    {"one", 1}, {"two", 2}, {"three", 3}, {"four", 4}, {"five", 5},
    {"six", 6}, {"seven", 7}, {"eight", 8}, {"nine", 9}, {"ten", 10}};

bool matches(const std::string& normalized, const KeywordRule& rule) {
  const auto padded = " " + normalized + " ";
  const auto phrase = " " + rule.phrase + " ";
  if (rule.mode == MatchMode::Prefix) return padded.rfind(phrase, 0) == 0;
  return padded.find(phrase) != std::string::npos;
}

}  // namespace

std::string normalize_utterance(std::string_view utterance) { return text::join(text::words(utterance), " "); }

std::optional<std::size_t> spoken_step_index(std::string_view utterance) {
  const auto w = text::words(utterance);
  for (std::size_t i = 0; i + 1 < w.size(); ++i) {
    if (w[i] != "step" && w[i] != "number") continue;
    const auto& n = w[i + 1];
    std::size_t value = 0;
    if (!n.empty() && std::all_of(n.begin(), n.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      value = std::stoul(n);
    } else {
      for (const auto& [word, v] : kNumberWords) {
        if (n == word) value = v;
      }
    }
    if (value >= 1) return value - 1;
  }
  return std::nullopt;
}

std::vector<KeywordRule> KeywordClassifier::standard_rules() { return parse_rules(kStandardRules); }

std::vector<KeywordRule> KeywordClassifier::parse_rules(std::string_view text) {
  std::vector<KeywordRule> rules;
  std::size_t lineno = 0;
  for (const auto& raw : text::split(text, '\n')) {
    ++lineno;
    const auto line = text::trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    std::istringstream in(line);
    std::string ev;
    std::string mode;
    in >> ev >> mode;
    std::string rest;
    std::getline(in, rest);
    const auto where = "classifier rules line " + std::to_string(lineno);
    auto event = parse_event(ev);
    if (!event) throw Error(ErrorCode::ParseError, where + ": unknown event '" + ev + "'");
    KeywordRule r;
    r.event = *event;
    if (mode == "prefix") {
      r.mode = MatchMode::Prefix;
    } else if (mode == "contains") {
      r.mode = MatchMode::Contains;
    } else {
      throw Error(ErrorCode::ParseError, where + ": mode must be prefix or contains");
    }
    r.phrase = normalize_utterance(rest);
    if (r.phrase.empty()) throw Error(ErrorCode::ParseError, where + ": empty phrase");
    rules.push_back(std::move(r));
  }
  return rules;
}

std::string KeywordClassifier::rules_to_text(const std::vector<KeywordRule>& rules) {
  std::string out;
  for (const auto& r : rules) {
    out += std::string(code(r.event)) + (r.mode == MatchMode::Prefix ? " prefix " : " contains ") + r.phrase + "\n";
  }
  return out;
}

Classification KeywordClassifier::classify(const ClassifyRequest& request) {
  const auto normalized = normalize_utterance(request.utterance);
  Classification c;
  const auto words = text::words(request.utterance);
  for (const auto& w : words) {
    if (w == "skip" || w == "skipping" || w == "skipped") c.skip_declared = true;
  }
  if (c.skip_declared) c.skip_step = spoken_step_index(request.utterance);

  for (const auto& rule : rules_) {
    if (matches(normalized, rule)) {
      c.kind = rule.event;
      return c;
    }
  }
  c.kind = c.skip_declared ? EventKind::StepQuery : EventKind::GeneralVisualQuery;
  return c;
}

Classification FailingClassifier::classify(const ClassifyRequest&) {
  throw std::runtime_error("classifier unavailable");
}

ClassifiedEvent classify_event(std::optional<std::string_view> utterance, std::uint64_t utterance_id,
                               const monitor::Observation* latest_observation, const monitor::Judgment* judgment,
                               DialogueState state, EventClassifier& classifier) {
  if (utterance) {
    Classification c;
    try {
      c = classifier.classify({*utterance, state, latest_observation});
    } catch (const Error& e) {
      throw Error(ErrorCode::ClassificationUnavailable, e.what());
    } catch (const std::exception& e) {
      throw Error(ErrorCode::ClassificationUnavailable, e.what());
    }
    if (is_alert(c.kind)) {
      throw Error(ErrorCode::ClassificationUnavailable, "classifier returned an alert event for an utterance");
    }
    auto event = c.kind == EventKind::Reset ? InteractionEvent::reset(ResetReason::Satisfied, utterance_id)
                                            : InteractionEvent::from_utterance(c.kind, utterance_id);
    return {event, c};
  }
  if (judgment && !judgment->degraded) {
    if (!judgment->missed_steps.empty()) {
      return {InteractionEvent::from_judgment(EventKind::MissedStepDetected, judgment->judgment_id),
              {EventKind::MissedStepDetected, false, std::nullopt}};
    }
    if (judgment->relevant && judgment->correct == false) {
      return {InteractionEvent::from_judgment(EventKind::IncorrectStepDetected, judgment->judgment_id),
              {EventKind::IncorrectStepDetected, false, std::nullopt}};
    }
  }
  throw Error(ErrorCode::EmptyInput, "no utterance and no alerting judgment to classify");
}

}  // namespace mise
