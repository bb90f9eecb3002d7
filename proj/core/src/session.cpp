#include "mise/session/session.hpp"

#include <algorithm>

#include "mise/common/error.hpp"
#include "mise/common/text.hpp"
#include "mise/knowledge/io.hpp"

namespace mise::session {
namespace {

constexpr std::string_view kNoSegment = "I couldn't find that part of the video.";

nlohmann::json segment_json(const media::SegmentRef& s) {
  return {{"sentence", s.sentence_index},
          {"t_start", s.t_start},
          {"t_end", s.t_end},
          {"reason", media::to_string(s.reason)}};
}

// First playback word in the utterance.
std::optional<media::MediaCommand> spoken_command(std::string_view utterance) {
  const auto words = text::words(utterance);
  bool keep = false;
  for (const auto& w : words) {
    if (w == "keep") keep = true;
    if (w == "pause") return media::MediaCommand::Pause;
    if (w == "resume" || w == "continue") return media::MediaCommand::Resume;
    if (w == "stop") return media::MediaCommand::Stop;
    if (w == "replay" || w == "again") return media::MediaCommand::Replay;
    if (w == "play" || w == "playing") return keep ? media::MediaCommand::Resume : media::MediaCommand::Play;
  }
  return std::nullopt;
}

std::string media_record_text(media::MediaCommand cmd, const media::PlaybackState& pb) {
  std::string out(media::to_string(cmd));
  if (!pb.queue.empty()) {
    std::vector<std::string> idx;
    for (const auto& s : pb.queue) idx.push_back(std::to_string(s.sentence_index));
    out += " sentences " + text::join(idx, ", ");
  }
  return out;
}

std::string alert_text(EventKind kind, const monitor::Judgment& j) {
  if (kind == EventKind::MissedStepDetected) {
    std::vector<std::string> idx;
    for (auto s : j.missed_steps) idx.push_back(std::to_string(s));
    return "missed steps " + text::join(idx, ", ");
  }
  return "incorrect step " + (j.matched_step ? std::to_string(*j.matched_step) : std::string("?"));
}

}  // namespace

Session::Session(SessionConfig cfg, knowledge::RecipeKnowledge knowledge, Adapters adapters, TemplateSet templates)
    : cfg_(std::move(cfg)),
      knowledge_(std::move(knowledge)),
      adapters_(adapters),
      templates_(std::move(templates)),
      store_(std::make_unique<memory::MemoryStore>()),
      ticks_(cfg_.tick_period),
      limiter_(cfg_.alert_cooldown) {
  validate(cfg_);
  knowledge::validate(knowledge_);
}

Session::~Session() { store_->attach_sink(nullptr); }

std::unique_ptr<Session> Session::start(const SessionConfig& cfg, Adapters adapters) {
  knowledge::RecipeKnowledge k;
  std::unique_ptr<Session> s;
  try {
    validate(cfg);
    k = knowledge::load_knowledge(cfg.recipe);
    auto templates = cfg.templates_dir.empty() ? TemplateSet::standard() : TemplateSet::load_dir(cfg.templates_dir);
    s = std::make_unique<Session>(cfg, std::move(k), adapters, std::move(templates));
    s->open_files(false);
  } catch (const Error& e) {
    throw Error(ErrorCode::StartupFailure, e.what());
  }
  s->emit("state", {{"from", code(DialogueState::Idle)}, {"to", code(DialogueState::Idle)}, {"event", nullptr}});
  return s;
}

std::unique_ptr<Session> Session::recover(const SessionConfig& cfg, Adapters adapters) {
  std::unique_ptr<Session> s;
  try {
    validate(cfg);
    auto k = knowledge::load_knowledge(cfg.recipe);
    auto templates = cfg.templates_dir.empty() ? TemplateSet::standard() : TemplateSet::load_dir(cfg.templates_dir);
    s = std::make_unique<Session>(cfg, std::move(k), adapters, std::move(templates));
    if (cfg.session_path.empty()) throw Error(ErrorCode::InvalidInput, "recovery needs a session file");
    std::ifstream in(cfg.session_path);
    if (!in) throw Error(ErrorCode::IoError, "cannot read " + cfg.session_path.string());
    s->store_ = memory::MemoryStore::load(in);
    for (const auto& r : s->store_->snapshot()) {
      if (r.links.response_id) s->next_response_id_ = std::max(s->next_response_id_, *r.links.response_id + 1);
      if (r.links.judgment_id) s->next_judgment_id_ = std::max(s->next_judgment_id_, *r.links.judgment_id + 1);
      if (r.links.tick_id) s->tick_id_base_ = std::max(s->tick_id_base_, *r.links.tick_id);
      s->now_ = std::max(s->now_, r.timestamp);
    }
    s->origin_ = s->now_;
    s->last_activity_ = s->now_;
    if (!cfg.trace_path.empty() && std::filesystem::exists(cfg.trace_path)) {
      for (const auto& r : read_trace(cfg.trace_path)) s->next_seq_ = std::max(s->next_seq_, r.seq + 1);
    }
    s->open_files(true);
  } catch (const Error& e) {
    throw Error(ErrorCode::StartupFailure, e.what());
  }
  s->emit("state", {{"from", code(DialogueState::Idle)}, {"to", code(DialogueState::Idle)}, {"event", nullptr}});
  return s;
}

void Session::open_files(bool append) {
  const auto mode = append ? std::ios::app : std::ios::trunc;
  if (!cfg_.trace_path.empty()) {
    trace_file_.open(cfg_.trace_path, std::ios::out | mode);
    if (!trace_file_) throw Error(ErrorCode::IoError, "cannot open trace file " + cfg_.trace_path.string());
  }
  if (!cfg_.session_path.empty()) {
    session_file_.open(cfg_.session_path, std::ios::out | mode);
    if (!session_file_) throw Error(ErrorCode::IoError, "cannot open session file " + cfg_.session_path.string());
    store_->attach_sink(&session_file_);
  }
}

std::optional<SessionTime> Session::idle_deadline() const {
  if (state_ == DialogueState::Idle) return std::nullopt;
  return last_activity_ + cfg_.idle_timeout;
}

void Session::advance_to(SessionTime t, bool inclusive) {
  if (t < now_) throw Error(ErrorCode::ClockViolation, "session time cannot move backwards");
  for (;;) {
    const auto tick_at = origin_ + ticks_.next_due();
    const auto idle_at = idle_deadline();
    const bool tick_first = !idle_at || tick_at <= *idle_at;
    const auto next = tick_first ? tick_at : *idle_at;
    if (inclusive ? next > t : next >= t) break;
    advance_playback_to(next);
    now_ = next;
    if (tick_first)
      fire_tick(next);
    else
      fire_idle(next);
  }
  advance_playback_to(t);
  now_ = t;
}

void Session::advance_playback_to(SessionTime t) {
  if (playback_.status != media::PlaybackStatus::Playing || t <= now_) return;
  auto next = media::advance_playback(playback_, to_seconds(t - now_));
  if (next.status != playback_.status || next.current != playback_.current) {
    const auto saved = now_;
    now_ = t;
    set_playback(next);
    now_ = saved;
  } else {
    playback_ = next;
  }
}

void Session::fire_tick(SessionTime at) {
  const auto prev = origin_ + ticks_.last_tick_time();
  const auto tick_id = tick_id_base_ + ticks_.fire();

  const double from_s = to_seconds(prev);
  const double to_s = to_seconds(at);
  auto first = std::find_if(frames_.begin(), frames_.end(), [&](const auto& f) { return f.timestamp > from_s; });
  auto last = std::find_if(first, frames_.end(), [&](const auto& f) { return f.timestamp > to_s; });
  const std::span<const knowledge::FrameRecord> window(first, last);

  auto obs = monitor::tick(tick_id, at, prev, window, adapters_.perceiver);
  frames_.erase(frames_.begin(), last);
  latest_observation_ = obs;

  memory::MemoryRecord obs_rec;
  obs_rec.kind = memory::RecordKind::Observation;
  obs_rec.timestamp = at;
  obs_rec.text = obs.summary();
  obs_rec.links.tick_id = tick_id;
  obs_rec.links.step = obs.matched_step;
  store_->append(std::move(obs_rec));

  const auto judgment = monitor::judge(obs, knowledge_, progress_, adapters_.judge, next_judgment_id_++);
  memory::MemoryRecord j_rec;
  j_rec.kind = memory::RecordKind::Judgment;
  j_rec.timestamp = at;
  j_rec.text = judgment.summary();
  j_rec.links.tick_id = tick_id;
  j_rec.links.judgment_id = judgment.judgment_id;
  j_rec.links.step = judgment.matched_step;
  store_->append(std::move(j_rec));

  const auto update = monitor::advance_progress(judgment, progress_, knowledge_.steps.size());
  progress_ = update.progress;

  TraceRecord rec;
  rec.stimulus = StimulusKind::Tick;
  rec.tick_id = tick_id;
  rec.judgment_id = judgment.judgment_id;
  rec.step = judgment.matched_step;
  rec.from_state = rec.to_state = state_;
  if (obs.degraded) rec.error = std::string(to_string(ErrorCode::AdapterUnavailable));
  if (update.rejected) rec.error = std::string(to_string(ErrorCode::InvalidInput));
  finish(rec);

  for (auto kind : monitor::emit_alerts(judgment)) {
    if (limiter_.admit(kind, monitor::alert_step(kind, judgment), at)) dispatch_alert(kind, judgment);
  }
}

void Session::fire_idle(SessionTime at) {
  (void)at;
  TraceRecord rec;
  rec.stimulus = StimulusKind::Idle;
  rec.classified_event = EventKind::Reset;
  rec.from_state = state_;
  const auto to = transition(state_, EventKind::Reset).value_or(state_);
  emit("state", {{"from", code(state_)}, {"to", code(to)}, {"event", code(EventKind::Reset)}, {"reason", "idle_timeout"}});
  state_ = to;
  rec.to_state = to;
  finish(rec);
}

DispatchResult Session::dispatch_alert(EventKind kind, const monitor::Judgment& j) {
  DispatchResult out;
  const auto step = monitor::alert_step(kind, j);

  memory::MemoryRecord a;
  a.kind = memory::RecordKind::Alert;
  a.timestamp = now_;
  a.text = std::string(code(kind)) + " " + alert_text(kind, j);
  a.links.judgment_id = j.judgment_id;
  a.links.tick_id = j.tick_id;
  a.links.step = step;
  store_->append(std::move(a));

  nlohmann::json steps = kind == EventKind::MissedStepDetected ? nlohmann::json(j.missed_steps)
                                                               : nlohmann::json::array({step});
  emit("alert", {{"event", code(kind)}, {"judgment_id", j.judgment_id}, {"tick_id", j.tick_id}, {"steps", steps}});

  TraceRecord rec;
  rec.stimulus = StimulusKind::Alert;
  rec.classified_event = kind;
  rec.judgment_id = j.judgment_id;
  rec.tick_id = j.tick_id;
  rec.step = step;
  respond(rec, out, kind, std::nullopt, std::nullopt, j);
  finish(rec);
  out.trace = rec;
  return out;
}

void Session::respond(TraceRecord& rec, DispatchResult& out, EventKind kind, const std::optional<std::string>& query,
                      std::optional<std::uint64_t> query_record, const std::optional<monitor::Judgment>& judgment) {
  const auto from = state_;
  rec.from_state = from;
  rec.to_state = from;
  const auto to = transition(from, kind);
  if (!to) {
    rec.rejected = true;
    out.accepted = false;
    emit("state", {{"from", code(from)}, {"to", code(from)}, {"event", code(kind)}, {"rejected", true}});
    return;
  }
  if (*to == DialogueState::Idle) {
    state_ = *to;
    rec.to_state = *to;
    emit("state", {{"from", code(from)}, {"to", code(*to)}, {"event", code(kind)}, {"reason", "satisfied"}});
    return;
  }

  ResponseEnvelope env;
  try {
    const memory::ContextAssembler assembler(*store_, knowledge_, scorer_);
    memory::ContextRequest req;
    req.state = *to;
    req.trigger = kind;
    req.query = query;
    req.query_record_id = query_record;
    req.progress = progress_;
    req.judgment = judgment;
    req.budget = cfg_.context_budget;
    const auto bundle = assembler.assemble(req);
    env = render_response(*to, bundle, adapters_.generator, templates_, next_response_id_, now_);
  } catch (const Error& e) {
    rec.error = std::string(to_string(e.code()));
    out.accepted = false;
    emit_error(e.code(), e.what());
    try {
      adapters_.tts.synthesize(kApology, cfg_.tts_speed);
    } catch (const std::exception&) {
      rec.tts_failed = true;
    }
    return;
  }
  ++next_response_id_;
  state_ = *to;
  rec.to_state = *to;
  emit("state", {{"from", code(from)}, {"to", code(*to)}, {"event", code(kind)}});

  evidence_.record(env.response_id, env.evidence_segments);
  memory::MemoryRecord r;
  r.kind = memory::RecordKind::Response;
  r.timestamp = now_;
  r.text = env.text;
  r.links.response_id = env.response_id;
  r.links.step = progress_.current_step;
  for (const auto& s : env.evidence_segments) r.links.sentences.push_back(s.sentence_index);
  if (judgment) r.links.judgment_id = judgment->judgment_id;
  store_->append(std::move(r));
  last_response_id_ = env.response_id;
  last_activity_ = now_;

  nlohmann::json evidence = nlohmann::json::array();
  for (const auto& s : env.evidence_segments) evidence.push_back(segment_json(s));
  emit("response", {{"response_id", env.response_id},
                    {"state", code(env.state)},
                    {"template", env.template_id},
                    {"text", env.text},
                    {"evidence", evidence},
                    {"sources", env.sources}});
  rec.response_id = env.response_id;
  rec.response_text = env.text;
  rec.tts_failed = !speak(env);
  out.response = std::move(env);
}

bool Session::speak(const ResponseEnvelope& envelope) {
  if (playback_.status == media::PlaybackStatus::Playing) {
    set_playback(media::control(media::MediaCommand::Pause, playback_).state);
  }
  try {
    const auto ref = adapters_.tts.synthesize(envelope.text, cfg_.tts_speed);
    emit("tts", {{"response_id", envelope.response_id}, {"audio_ref", ref}, {"speed", cfg_.tts_speed}});
    return true;
  } catch (const std::exception& e) {
    emit("error", {{"code", to_string(ErrorCode::AdapterUnavailable)},
                   {"message", std::string("speech synthesis failed, response delivered as text: ") + e.what()},
                   {"response_id", envelope.response_id}});
    return false;
  }
}

DispatchResult Session::ingest_utterance(std::string_view text) {
  DispatchResult out;
  const auto trimmed = text::trim(text);
  if (trimmed.empty()) {
    emit_error(ErrorCode::InvalidInput, "empty utterance");
    out.accepted = false;
    return out;
  }
  memory::MemoryRecord u;
  u.kind = memory::RecordKind::Utterance;
  u.timestamp = now_;
  u.text = trimmed;
  u.links.step = progress_.current_step;
  const auto uid = store_->append(std::move(u));
  last_activity_ = now_;

  TraceRecord rec;
  rec.stimulus = StimulusKind::Utterance;
  rec.utterance = trimmed;
  rec.record_id = uid;
  rec.from_state = rec.to_state = state_;

  Classification c;
  try {
    const auto* obs = latest_observation_ ? &*latest_observation_ : nullptr;
    c = classify_event(trimmed, uid, obs, nullptr, state_, adapters_.classifier).classification;
  } catch (const Error& e) {
    c.kind = EventKind::GeneralVisualQuery;
    rec.error = std::string(to_string(e.code()));
    emit_error(e.code(), e.what());
  }
  rec.classified_event = c.kind;

  if (c.skip_declared) {
    const auto step = c.skip_step.value_or(progress_.current_step);
    if (step < knowledge_.steps.size() && !progress_.completed_steps.contains(step)) {
      progress_.skipped_steps.insert(step);
      rec.step = step;
    }
  }

  if (c.kind == EventKind::MediaControl) {
    handle_media(rec, trimmed, std::nullopt);
    out.accepted = !rec.error.has_value();
  } else {
    respond(rec, out, c.kind, std::string(trimmed), uid, std::nullopt);
  }
  finish(rec);
  out.trace = rec;
  return out;
}

DispatchResult Session::command(media::MediaCommand cmd) {
  DispatchResult out;
  last_activity_ = now_;
  TraceRecord rec;
  rec.stimulus = StimulusKind::Command;
  rec.classified_event = EventKind::MediaControl;
  rec.from_state = rec.to_state = state_;
  handle_media(rec, std::nullopt, cmd);
  out.accepted = !rec.error.has_value();
  finish(rec);
  out.trace = rec;
  return out;
}

void Session::handle_media(TraceRecord& rec, std::optional<std::string_view> request,
                           std::optional<media::MediaCommand> cmd) {
  if (!cmd && request) cmd = spoken_command(*request);
  if (!cmd) cmd = media::MediaCommand::Play;

  std::vector<media::SegmentRef> segments;
  if (request && (*cmd == media::MediaCommand::Play || *cmd == media::MediaCommand::Replay)) {
    try {
      segments = media::locate_segments(*request, knowledge_, matcher_);
      for (auto& s : segments) s.reason = media::SegmentReason::UserRequest;
    } catch (const Error&) {
    }
  }

  media::ControlOutcome outcome;
  if (!segments.empty()) {
    outcome = media::control(media::MediaCommand::Play, playback_, segments);
  } else if (*cmd == media::MediaCommand::Play) {
    if (playback_.status == media::PlaybackStatus::Paused) {
      outcome = media::control(media::MediaCommand::Resume, playback_);
    } else if (last_response_id_ && !evidence_.locate(*last_response_id_).empty()) {
      outcome = media::control(media::MediaCommand::Play, playback_, evidence_.locate(*last_response_id_));
    } else if (!playback_.queue.empty()) {
      outcome = media::control(media::MediaCommand::Play, playback_);
    } else {
      rec.error = std::string(to_string(ErrorCode::NoSegmentFound));
      emit_error(ErrorCode::NoSegmentFound, std::string(kNoSegment));
      try {
        adapters_.tts.synthesize(kNoSegment, cfg_.tts_speed);
      } catch (const std::exception&) {
        rec.tts_failed = true;
      }
      return;
    }
  } else {
    outcome = media::control(*cmd, playback_);
  }

  if (!outcome.accepted) {
    rec.error = std::string(to_string(ErrorCode::InvalidCommand));
    emit_error(ErrorCode::InvalidCommand, outcome.error);
    return;
  }
  set_playback(outcome.state);

  memory::MemoryRecord m;
  m.kind = memory::RecordKind::MediaAction;
  m.timestamp = now_;
  m.text = media_record_text(*cmd, playback_);
  for (const auto& s : playback_.queue) m.links.sentences.push_back(s.sentence_index);
  if (segments.empty() && last_response_id_) m.links.response_id = last_response_id_;
  store_->append(std::move(m));
}

DispatchResult Session::declare_skip(std::size_t step) {
  DispatchResult out;
  if (step >= knowledge_.steps.size() || progress_.completed_steps.contains(step)) {
    emit_error(ErrorCode::InvalidInput, "cannot skip step " + std::to_string(step));
    out.accepted = false;
    return out;
  }
  last_activity_ = now_;
  progress_.skipped_steps.insert(step);
  TraceRecord rec;
  rec.stimulus = StimulusKind::SkipDeclaration;
  rec.step = step;
  rec.from_state = rec.to_state = state_;
  finish(rec);
  out.trace = rec;
  return out;
}

void Session::ingest_frames(std::vector<knowledge::FrameRecord> frames) {
  frames_.insert(frames_.end(), std::make_move_iterator(frames.begin()), std::make_move_iterator(frames.end()));
  std::stable_sort(frames_.begin(), frames_.end(),
                   [](const auto& a, const auto& b) { return a.timestamp < b.timestamp; });
}

void Session::set_tts_speed(double speed) {
  auto next = cfg_;
  next.tts_speed = speed;
  validate(next);
  cfg_.tts_speed = speed;
}

void Session::set_playback(const media::PlaybackState& next) {
  playback_ = next;
  const auto* seg = playback_.current_segment();
  emit("playback", {{"status", media::to_string(playback_.status)},
                    {"segment", seg ? segment_json(*seg) : nlohmann::json(nullptr)},
                    {"position", playback_.position},
                    {"queue", playback_.queue.size()}});
}

void Session::emit(std::string type, nlohmann::json body) {
  body["type"] = std::move(type);
  body["seq"] = next_msg_++;
  body["t_ms"] = now_.count();
  outbox_.push_back(body);
  if (listener_) listener_(outbox_.back());
}

void Session::emit_error(ErrorCode code, const std::string& message) {
  emit("error", {{"code", to_string(code)}, {"message", message}});
}

void Session::finish(TraceRecord& rec) {
  rec.seq = next_seq_++;
  rec.at = now_;
  trace_.push_back(rec);
  if (trace_file_.is_open()) {
    trace_file_ << trace_line(rec);
    trace_file_.flush();
  }
}

std::vector<OutMessage> Session::drain_outbox() {
  std::vector<OutMessage> out;
  out.swap(outbox_);
  return out;
}

}  // namespace mise::session
