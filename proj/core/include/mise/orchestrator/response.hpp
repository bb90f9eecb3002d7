#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mise/common/clock.hpp"
#include "mise/media/segments.hpp"
#include "mise/memory/context.hpp"
#include "mise/orchestrator/events.hpp"
#include "mise/orchestrator/templates.hpp"

namespace mise {

inline constexpr SessionTime kDefaultIdleTimeout{5000};
inline constexpr std::string_view kApology = "Sorry, I couldn't come up with an answer just now. Please ask again.";

struct ResponseEnvelope {
  std::uint64_t response_id = 0;
  DialogueState state = DialogueState::Idle;
  std::string template_id;
  std::string text;
  std::vector<media::SegmentRef> evidence_segments;
  std::vector<std::uint64_t> sources;
  SessionTime created_at{0};

  bool operator==(const ResponseEnvelope&) const = default;
};

struct GenerationRequest {
  std::string_view template_id;
  DialogueState state = DialogueState::Idle;
  std::string_view prompt;
  const memory::ContextBundle& context;
};

class ResponseGenerator {
 public:
  virtual ~ResponseGenerator() = default;
  virtual std::string generate(const GenerationRequest& request) = 0;
};

// Slot values a template is filled with.
std::map<std::string, std::string> prompt_slots(const memory::ContextBundle& context);
std::string render_prompt(const PromptTemplate& t, const memory::ContextBundle& context);

// Fills the state's template, calls the generator and attaches evidence
// drawn from the bundle's knowledge slices. Throws InvalidInput for S0 and
// GenerationUnavailable when the generator fails or returns blank text.
ResponseEnvelope render_response(DialogueState state, const memory::ContextBundle& context,
                                 ResponseGenerator& generator, const TemplateSet& templates,
                                 std::uint64_t response_id, SessionTime now);

// E9 (idle_timeout) once the session has been quiet for `timeout` outside S0.
std::optional<InteractionEvent> handle_idle(SessionTime now, SessionTime last_activity, DialogueState state,
                                            SessionTime timeout = kDefaultIdleTimeout);

// ---- deterministic generators ----

// "[<template id>] <prompt>"
class EchoGenerator final : public ResponseGenerator {
 public:
  std::string generate(const GenerationRequest& request) override;
};

// Short answers assembled from the bundle: next-step summaries for S2,
// missed or incorrect steps for S3 alerts, the latest observation for S1
// and S4, retrieved memory for "did I already ..." questions.
class GroundedGenerator final : public ResponseGenerator {
 public:
  std::string generate(const GenerationRequest& request) override;
};

// Replies keyed by template id with {{slot}} substitution from
// prompt_slots(); unknown template ids throw.
class CannedGenerator final : public ResponseGenerator {
 public:
  explicit CannedGenerator(std::map<std::string, std::string> replies) : replies_(std::move(replies)) {}
  std::string generate(const GenerationRequest& request) override;

 private:
  std::map<std::string, std::string> replies_;
};

class FailingGenerator final : public ResponseGenerator {
 public:
  std::string generate(const GenerationRequest&) override;
};

}  // namespace mise
