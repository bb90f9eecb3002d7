#include "mise/orchestrator/response.hpp"

#include <stdexcept>

#include "mise/common/error.hpp"
#include "mise/common/text.hpp"

namespace mise {
namespace {

std::string records_block(const std::vector<memory::MemoryRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    out += "- [" + std::string(memory::to_string(r.kind)) + " @" + std::to_string(r.timestamp.count()) + "ms] " +
           r.text + "\n";
  }
  return out.empty() ? "(none)\n" : out;
}

std::string alert_text(const memory::ContextBundle& c) {
  if (!c.judgment || !is_alert(c.trigger)) return "none";
  const auto& j = *c.judgment;
  std::string out = c.trigger == EventKind::MissedStepDetected ? "missed steps" : "incorrect step";
  if (c.trigger == EventKind::MissedStepDetected) {
    std::vector<std::string> idx;
    for (auto s : j.missed_steps) idx.push_back(std::to_string(s));
    out += " " + text::join(idx, ", ");
  } else if (j.matched_step) {
    out += " " + std::to_string(*j.matched_step);
  }
  return out;
}

}  // namespace

std::map<std::string, std::string> prompt_slots(const memory::ContextBundle& c) {
  std::string knowledge;
  for (const auto& s : c.knowledge_slices) {
    knowledge += "- (" + std::to_string(s.index) + ") " + s.text;
    if (!s.visual_description.empty()) knowledge += " | visual: " + s.visual_description;
    if (!s.audio_description.empty()) knowledge += " | audio: " + s.audio_description;
    knowledge += "\n";
  }
  std::vector<std::string> steps;
  for (const auto& s : c.focus_steps) steps.push_back(std::to_string(s.index) + ". " + s.summary);

  return {{"state_name", std::string(name(c.state))},
          {"query", c.user_query.value_or("")},
          {"recent_turns", records_block(c.recent_turns)},
          {"observations", records_block(c.recent_observations)},
          {"retrieved", records_block(c.retrieved)},
          {"knowledge", knowledge.empty() ? "(none)\n" : knowledge},
          {"focus_steps", steps.empty() ? "(unknown)" : text::join(steps, "; ")},
          {"alert", alert_text(c)}};
}

std::string render_prompt(const PromptTemplate& t, const memory::ContextBundle& context) {
  return fill_template(t.text, prompt_slots(context));
}

ResponseEnvelope render_response(DialogueState state, const memory::ContextBundle& context,
                                 ResponseGenerator& generator, const TemplateSet& templates,
                                 std::uint64_t response_id, SessionTime now) {
  if (state == DialogueState::Idle) throw Error(ErrorCode::InvalidInput, "no response is rendered in S0");
  const auto& tpl = templates.for_state(state);
  const auto prompt = render_prompt(tpl, context);

  std::string reply;
  try {
    reply = generator.generate({tpl.id, state, prompt, context});
  } catch (const std::exception& e) {
    throw Error(ErrorCode::GenerationUnavailable, e.what());
  }
  reply = text::trim(reply);
  if (reply.empty()) throw Error(ErrorCode::GenerationUnavailable, "generator returned no text");

  ResponseEnvelope env;
  env.response_id = response_id;
  env.state = state;
  env.template_id = tpl.id;
  env.text = std::move(reply);
  env.evidence_segments = media::select_evidence(context.knowledge_slices, context.user_query.value_or(""), env.text);
  env.sources = context.source_ids();
  env.created_at = now;
  return env;
}

std::optional<InteractionEvent> handle_idle(SessionTime now, SessionTime last_activity, DialogueState state,
                                            SessionTime timeout) {
  if (state == DialogueState::Idle) return std::nullopt;
  if (now - last_activity < timeout) return std::nullopt;
  return InteractionEvent::reset(ResetReason::IdleTimeout);
}

std::string EchoGenerator::generate(const GenerationRequest& request) {
  return "[" + std::string(request.template_id) + "] " + std::string(request.prompt);
}

namespace {

const knowledge::Step* focus_step(const memory::ContextBundle& c, std::size_t index) {
  for (const auto& s : c.focus_steps)
    if (s.index == index) return &s;
  return nullptr;
}

std::string step_phrase(const knowledge::Step& s) { return "step " + std::to_string(s.index + 1) + ", " + s.summary; }

const memory::MemoryRecord* latest_observation(const memory::ContextBundle& c) {
  return c.recent_observations.empty() ? nullptr : &c.recent_observations.back();
}

bool asks_about_past(std::string_view query) {
  const auto words = text::words(query);
  for (const auto& w : words)
    if (w == "already" || w == "earlier" || w == "before" || w == "did") return true;
  return false;
}

const memory::MemoryRecord* best_memory(const memory::ContextBundle& c) {
  if (!c.user_query) return nullptr;
  const auto query = text::content_token_set(*c.user_query);
  const memory::MemoryRecord* best = nullptr;
  std::size_t best_overlap = 0;
  for (const auto& r : c.retrieved) {
    if (r.kind != memory::RecordKind::Observation && r.kind != memory::RecordKind::Utterance) continue;
    const auto n = text::shared_token_count(query, text::content_token_set(r.text));
    if (n > best_overlap) {
      best_overlap = n;
      best = &r;
    }
  }
  return best;
}

std::string slice_text(const memory::ContextBundle& c, std::size_t max_sentences) {
  std::vector<std::string> parts;
  for (const auto& s : c.knowledge_slices) {
    if (parts.size() == max_sentences) break;
    parts.push_back(s.text);
  }
  return text::join(parts, " ");
}

}  // namespace

std::string GroundedGenerator::generate(const GenerationRequest& request) {
  const auto& c = request.context;
  const auto* obs = latest_observation(c);
  switch (request.state) {
    case DialogueState::FoodState:
      if (obs) return "From what I can see: " + obs->text + ".";
      return "I can't see the food clearly yet. " + slice_text(c, 1);
    case DialogueState::StepGuide: {
      if (c.user_query && asks_about_past(*c.user_query)) {
        if (const auto* m = best_memory(c)) return "From earlier in the session: " + m->text + ".";
        return "I have no record of that in this session.";
      }
      if (c.focus_steps.empty()) return "Let's start with the first step. " + slice_text(c, 1);
      std::string out = "You are on " + step_phrase(c.focus_steps.front()) + ".";
      if (c.focus_steps.size() > 1) out += " Next, " + step_phrase(c.focus_steps[1]) + ".";
      return out;
    }
    case DialogueState::ProblemSolving: {
      if (c.trigger == EventKind::MissedStepDetected && c.judgment && !c.judgment->missed_steps.empty()) {
        const auto* s = focus_step(c, c.judgment->missed_steps.front());
        return "It appears you have missed a step: " +
               (s ? step_phrase(*s) : "step " + std::to_string(c.judgment->missed_steps.front() + 1)) + ".";
      }
      if (c.trigger == EventKind::IncorrectStepDetected && c.judgment && c.judgment->matched_step) {
        const auto* s = focus_step(c, *c.judgment->matched_step);
        return "That doesn't look right for " +
               (s ? step_phrase(*s) : "step " + std::to_string(*c.judgment->matched_step + 1)) +
               ". " + slice_text(c, 1);
      }
      return "Here is what the recipe says: " + slice_text(c, 2);
    }
    case DialogueState::GeneralVisual:
      if (obs) return "I can see: " + obs->text + ".";
      return "I don't have a view of the scene yet.";
    case DialogueState::CorrectionReview:
      return "Let me correct that. " + slice_text(c, 2);
    case DialogueState::DetailElaboration:
      return "More detail: " + slice_text(c, 3);
    case DialogueState::Idle:
      break;
  }
  return {};
}

std::string CannedGenerator::generate(const GenerationRequest& request) {
  auto it = replies_.find(std::string(request.template_id));
  if (it == replies_.end()) throw std::runtime_error("no canned reply for " + std::string(request.template_id));
  return fill_template(it->second, prompt_slots(request.context));
}

std::string FailingGenerator::generate(const GenerationRequest&) { throw std::runtime_error("generator offline"); }

}  // namespace mise
