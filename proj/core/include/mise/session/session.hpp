#pragma once

#include <cstdint>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "mise/common/error.hpp"
#include "mise/knowledge/types.hpp"
#include "mise/media/playback.hpp"
#include "mise/media/segments.hpp"
#include "mise/memory/context.hpp"
#include "mise/memory/store.hpp"
#include "mise/monitor/monitor.hpp"
#include "mise/orchestrator/classifier.hpp"
#include "mise/orchestrator/response.hpp"
#include "mise/orchestrator/templates.hpp"
#include "mise/orchestrator/transition.hpp"
#include "mise/session/adapters.hpp"
#include "mise/session/config.hpp"
#include "mise/session/trace.hpp"

namespace mise::session {

// Engine -> client message. `body` always carries "type", "seq" and "t_ms".
//   state     {from, to, event}
//   response  {response_id, state, template, text, evidence, sources, tts_failed}
//   alert     {event, judgment_id, tick_id, steps}
//   playback  {status, segment, position, queue}
//   tts       {response_id, audio_ref, speed}
//   error     {code, message}
using OutMessage = nlohmann::json;

struct DispatchResult {
  bool accepted = true;
  std::optional<TraceRecord> trace;
  std::optional<ResponseEnvelope> response;
};

// One session. Not thread-safe: a single writer (the event loop or the
// harness) calls every mutating method in stimulus order. Session time only
// moves forward through advance_to().
class Session {
 public:
  Session(SessionConfig cfg, knowledge::RecipeKnowledge knowledge, Adapters adapters,
          TemplateSet templates = TemplateSet::standard());
  ~Session();

  Session(const Session&) = delete;
  Session& operator=(const Session&) = delete;

  // Loads the recipe, opens trace and session files. Throws StartupFailure
  // naming the underlying problem.
  static std::unique_ptr<Session> start(const SessionConfig& cfg, Adapters adapters);

  // Like start(), but first reloads memory from the session file of an
  // earlier run. The session resumes in S0 at the last recorded time.
  static std::unique_ptr<Session> recover(const SessionConfig& cfg, Adapters adapters);

  // Fires every monitor tick and idle deadline up to `t`, in time order
  // (ticks before idle checks at equal times). With inclusive=false, events
  // due exactly at `t` are left for later so a stimulus at `t` goes first.
  void advance_to(SessionTime t, bool inclusive = true);

  // Stimuli, dispatched at the current session time.
  DispatchResult ingest_utterance(std::string_view text);
  DispatchResult command(media::MediaCommand cmd);
  DispatchResult declare_skip(std::size_t step);
  void ingest_frames(std::vector<knowledge::FrameRecord> frames);
  void set_tts_speed(double speed);

  // Speaks a response; TTS preempts segment playback.
  bool speak(const ResponseEnvelope& envelope);

  SessionTime now() const { return now_; }
  DialogueState state() const { return state_; }
  const monitor::ProgressState& progress() const { return progress_; }
  const media::PlaybackState& playback() const { return playback_; }
  const memory::MemoryStore& memory() const { return *store_; }
  const knowledge::RecipeKnowledge& knowledge() const { return knowledge_; }
  const SessionConfig& config() const { return cfg_; }
  const std::vector<TraceRecord>& trace() const { return trace_; }
  const media::EvidenceRegistry& evidence() const { return evidence_; }
  std::uint64_t ticks() const { return ticks_.ticks_done(); }

  // Outbound stream. Messages accumulate until drained; a listener, when
  // set, also sees each message as it is produced.
  std::vector<OutMessage> drain_outbox();
  const std::vector<OutMessage>& outbox() const { return outbox_; }
  void set_listener(std::function<void(const OutMessage&)> listener) { listener_ = std::move(listener); }

  // Adds an error message to the outbound stream.
  void emit_error(ErrorCode code, const std::string& message);

 private:
  void fire_tick(SessionTime at);
  void fire_idle(SessionTime at);
  DispatchResult dispatch_alert(EventKind kind, const monitor::Judgment& j);
  void handle_media(TraceRecord& rec, std::optional<std::string_view> request, std::optional<media::MediaCommand> cmd);
  void open_files(bool append);
  // Transition + context + generation for a state-changing event.
  void respond(TraceRecord& rec, DispatchResult& out, EventKind kind, const std::optional<std::string>& query,
               std::optional<std::uint64_t> query_record, const std::optional<monitor::Judgment>& judgment);
  void set_playback(const media::PlaybackState& next);
  void advance_playback_to(SessionTime t);
  void emit(std::string type, nlohmann::json body);
  void finish(TraceRecord& rec);
  std::optional<SessionTime> idle_deadline() const;

  SessionConfig cfg_;
  knowledge::RecipeKnowledge knowledge_;
  Adapters adapters_;
  TemplateSet templates_;

  std::unique_ptr<memory::MemoryStore> store_;
  memory::RecencyLexicalScorer scorer_;
  media::LexicalMatcher matcher_;
  media::EvidenceRegistry evidence_;
  monitor::TickSchedule ticks_;
  monitor::AlertLimiter limiter_;

  SessionTime now_{0};
  SessionTime origin_{0};
  SessionTime last_activity_{0};
  DialogueState state_ = DialogueState::Idle;
  monitor::ProgressState progress_;
  media::PlaybackState playback_;
  std::vector<knowledge::FrameRecord> frames_;
  std::optional<monitor::Observation> latest_observation_;
  std::optional<std::uint64_t> last_response_id_;

  std::uint64_t next_response_id_ = 1;
  std::uint64_t next_judgment_id_ = 1;
  std::uint64_t tick_id_base_ = 0;
  std::uint64_t next_seq_ = 1;
  std::uint64_t next_msg_ = 1;

  std::vector<TraceRecord> trace_;
  std::vector<OutMessage> outbox_;
  std::function<void(const OutMessage&)> listener_;
  std::ofstream trace_file_;
  std::ofstream session_file_;
};

}  // namespace mise::session
