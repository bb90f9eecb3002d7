#include "mise/session/trace.hpp"

#include <map>
#include <ostream>

#include "mise/common/error.hpp"
#include "mise/knowledge/io.hpp"

namespace mise::session {
namespace {

constexpr std::string_view kStimulusNames[] = {"utterance", "command", "tick", "alert", "idle", "skip_declaration"};

template <typename T>
void put(nlohmann::json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

template <typename T>
std::optional<T> get(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

DialogueState state_field(const nlohmann::json& j, const char* key) {
  auto s = parse_state(j.at(key).get<std::string>());
  if (!s) throw Error(ErrorCode::ParseError, std::string("bad state in ") + key);
  return *s;
}

std::optional<EventKind> event_field(const nlohmann::json& j, const char* key) {
  auto s = get<std::string>(j, key);
  if (!s) return std::nullopt;
  auto e = parse_event(*s);
  if (!e) throw Error(ErrorCode::ParseError, "bad event " + *s);
  return e;
}

}  // namespace

std::string_view to_string(StimulusKind k) noexcept { return kStimulusNames[static_cast<int>(k)]; }

std::optional<StimulusKind> parse_stimulus_kind(std::string_view s) noexcept {
  for (int i = 0; i < 6; ++i)
    if (kStimulusNames[i] == s) return static_cast<StimulusKind>(i);
  return std::nullopt;
}

nlohmann::json to_json(const TraceRecord& r) {
  nlohmann::json j = {{"seq", r.seq},
                      {"stimulus", to_string(r.stimulus)},
                      {"t_ms", r.at.count()},
                      {"from", code(r.from_state)},
                      {"to", code(r.to_state)}};
  put(j, "utterance", r.utterance);
  put(j, "record_id", r.record_id);
  if (r.classified_event) j["event"] = code(*r.classified_event);
  if (r.rejected) j["rejected"] = true;
  put(j, "response_id", r.response_id);
  put(j, "response", r.response_text);
  put(j, "tick_id", r.tick_id);
  put(j, "judgment_id", r.judgment_id);
  put(j, "step", r.step);
  if (r.tts_failed) j["tts_failed"] = true;
  put(j, "error", r.error);
  if (r.ground_truth_event) j["ground_truth"] = code(*r.ground_truth_event);
  put(j, "response_correct", r.response_correct);
  return j;
}

TraceRecord trace_from_json(const nlohmann::json& j) {
  TraceRecord r;
  try {
    r.seq = j.at("seq").get<std::uint64_t>();
    auto kind = parse_stimulus_kind(j.at("stimulus").get<std::string>());
    if (!kind) throw Error(ErrorCode::ParseError, "bad stimulus kind");
    r.stimulus = *kind;
    r.at = SessionTime{j.at("t_ms").get<std::int64_t>()};
    r.from_state = state_field(j, "from");
    r.to_state = state_field(j, "to");
    r.utterance = get<std::string>(j, "utterance");
    r.record_id = get<std::uint64_t>(j, "record_id");
    r.classified_event = event_field(j, "event");
    r.rejected = j.value("rejected", false);
    r.response_id = get<std::uint64_t>(j, "response_id");
    r.response_text = get<std::string>(j, "response");
    r.tick_id = get<std::uint64_t>(j, "tick_id");
    r.judgment_id = get<std::uint64_t>(j, "judgment_id");
    r.step = get<std::size_t>(j, "step");
    r.tts_failed = j.value("tts_failed", false);
    r.error = get<std::string>(j, "error");
    r.ground_truth_event = event_field(j, "ground_truth");
    r.response_correct = get<bool>(j, "response_correct");
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("trace record: ") + e.what());
  }
  return r;
}

std::string trace_line(const TraceRecord& r) { return to_json(r).dump() + "\n"; }

std::vector<TraceRecord> parse_trace(std::string_view text) {
  std::vector<TraceRecord> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    auto line = text.substr(pos, nl - pos);
    ++line_no;
    pos = nl + 1;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      out.push_back(trace_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::ParseError, "trace line " + std::to_string(line_no) + ": " + e.what());
    } catch (const Error& e) {
      throw Error(ErrorCode::ParseError, "trace line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::vector<TraceRecord> read_trace(const std::filesystem::path& path) {
  return parse_trace(knowledge::read_file(path));
}

void write_trace(const std::vector<TraceRecord>& records, std::ostream& out) {
  for (const auto& r : records) out << trace_line(r);
}

std::vector<Annotation> parse_annotations(std::string_view text) {
  std::vector<Annotation> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    auto line = text.substr(pos, nl - pos);
    ++line_no;
    pos = nl + 1;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      auto j = nlohmann::json::parse(line);
      Annotation a;
      a.seq = j.at("seq").get<std::uint64_t>();
      auto e = parse_event(j.at("event").get<std::string>());
      if (!e) throw Error(ErrorCode::ParseError, "bad event");
      a.ground_truth_event = *e;
      a.response_correct = j.at("correct").get<bool>();
      out.push_back(a);
    } catch (const std::exception& e) {
      throw Error(ErrorCode::ParseError, "labels line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

void annotate(std::vector<TraceRecord>& trace, const std::vector<Annotation>& labels) {
  std::map<std::uint64_t, TraceRecord*> by_seq;
  for (auto& r : trace)
    if (r.is_query()) by_seq[r.seq] = &r;
  for (const auto& a : labels) {
    auto it = by_seq.find(a.seq);
    if (it == by_seq.end())
      throw Error(ErrorCode::InvalidInput, "label for seq " + std::to_string(a.seq) + " matches no query record");
    it->second->ground_truth_event = a.ground_truth_event;
    it->second->response_correct = a.response_correct;
  }
}

}  // namespace mise::session
