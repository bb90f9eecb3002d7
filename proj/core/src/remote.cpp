#include "mise/session/remote.hpp"

#include <sstream>

#include <httplib.h>

#include "mise/common/error.hpp"
#include "mise/common/text.hpp"
#include "mise/knowledge/audio.hpp"

namespace mise::session {
namespace {

// "http://host:port/prefix" -> ("http://host:port", "/prefix")
std::pair<std::string, std::string> split_url(const std::string& url) {
  const auto scheme = url.find("://");
  const auto host_start = scheme == std::string::npos ? 0 : scheme + 3;
  const auto slash = url.find('/', host_start);
  if (slash == std::string::npos) return {url, ""};
  auto prefix = url.substr(slash);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  return {url.substr(0, slash), prefix};
}

nlohmann::json observation_json(const monitor::Observation& o) {
  nlohmann::json j = {{"tick_id", o.tick_id},
                      {"t_ms", o.timestamp.count()},
                      {"action", o.action},
                      {"items", o.visible_items},
                      {"sounds", o.sounds},
                      {"matched_step", nullptr}};
  if (o.matched_step) j["matched_step"] = *o.matched_step;
  return j;
}

}  // namespace

RemoteClient::RemoteClient(std::string base_url, std::string api_key, std::chrono::milliseconds timeout)
    : base_url_(std::move(base_url)), api_key_(std::move(api_key)), timeout_(timeout) {
  if (base_url_.empty()) throw Error(ErrorCode::AdapterUnavailable, "remote adapter endpoint is not configured");
}

RemoteClient::~RemoteClient() = default;

std::string RemoteClient::complete(std::string_view task, const nlohmann::json& payload) const {
  const auto [origin, prefix] = split_url(base_url_);
  httplib::Client cli(origin);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(timeout_);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(timeout_ - secs);
  cli.set_connection_timeout(secs.count(), usecs.count());
  cli.set_read_timeout(secs.count(), usecs.count());
  httplib::Headers headers;
  if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);

  const nlohmann::json body = {{"task", task}, {"payload", payload}};
  auto res = cli.Post(prefix + "/v1/complete", headers, body.dump(), "application/json");
  if (!res) throw Error(ErrorCode::AdapterUnavailable, std::string(task) + ": " + httplib::to_string(res.error()));
  if (res->status != 200)
    throw Error(ErrorCode::AdapterUnavailable, std::string(task) + ": HTTP " + std::to_string(res->status));
  try {
    auto j = nlohmann::json::parse(res->body);
    return j.at("text").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::AdapterUnavailable, std::string(task) + ": bad reply: " + e.what());
  }
}

Classification RemoteClassifier::classify(const ClassifyRequest& request) {
  nlohmann::json payload = {{"utterance", request.utterance}, {"state", code(request.state)}};
  if (request.latest_observation) payload["observation"] = observation_json(*request.latest_observation);
  const auto reply = client_->complete("classify", payload);

  std::istringstream in(reply);
  std::string event_code;
  in >> event_code;
  auto kind = parse_event(text::trim(event_code));
  if (!kind) throw Error(ErrorCode::ClassificationUnavailable, "unrecognized event \"" + reply + "\"");
  Classification c;
  c.kind = *kind;
  std::string word;
  if (in >> word && word == "skip") {
    c.skip_declared = true;
    std::size_t step = 0;
    if (in >> step) c.skip_step = step;
  }
  return c;
}

std::string RemoteGenerator::generate(const GenerationRequest& request) {
  return client_->complete("generate",
                           {{"template", request.template_id}, {"state", code(request.state)}, {"prompt", request.prompt}});
}

std::string RemotePerceiver::perceive(const monitor::PerceptionRequest& request) {
  nlohmann::json frames = nlohmann::json::array();
  for (const auto& f : request.frames) frames.push_back({{"t", f.timestamp}, {"image", f.image_path}});
  return client_->complete("perceive", {{"tick_id", request.tick_id},
                                        {"from_ms", request.from.count()},
                                        {"to_ms", request.to.count()},
                                        {"frames", frames},
                                        {"prompt_tag", request.prompt_tag},
                                        {"prompt", request.prompt}});
}

monitor::Judgment RemoteJudge::judge(const monitor::JudgeRequest& request) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : request.knowledge.steps) steps.push_back({{"index", s.index}, {"summary", s.summary}});
  const nlohmann::json progress = {{"current_step", request.progress.current_step},
                                   {"completed", request.progress.completed_steps},
                                   {"skipped", request.progress.skipped_steps}};
  const auto reply = client_->complete(
      "judge", {{"observation", observation_json(request.observation)}, {"steps", steps}, {"progress", progress}});
  try {
    auto j = nlohmann::json::parse(reply);
    monitor::Judgment out;
    out.relevant = j.at("relevant").get<bool>();
    if (j.contains("correct") && !j["correct"].is_null()) out.correct = j["correct"].get<bool>();
    if (j.contains("missed_steps")) out.missed_steps = j["missed_steps"].get<std::vector<std::size_t>>();
    if (j.contains("advanced_to") && !j["advanced_to"].is_null()) out.advanced_to = j["advanced_to"].get<std::size_t>();
    if (j.contains("matched_step") && !j["matched_step"].is_null())
      out.matched_step = j["matched_step"].get<std::size_t>();
    else
      out.matched_step = request.observation.matched_step;
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::AdapterUnavailable, std::string("judge: bad reply: ") + e.what());
  }
}

std::string RemoteTts::synthesize(std::string_view text, double speed) {
  return client_->complete("speak", {{"text", text}, {"speed", speed}});
}

std::string RemoteVisualDescriber::describe(const knowledge::VisualRequest& request) {
  nlohmann::json keyframes = nlohmann::json::array();
  for (const auto& k : request.keyframes) keyframes.push_back({{"t", k.timestamp}, {"hash", k.content_hash}});
  return client_->complete("describe_visual",
                           {{"sentence", request.sentence_index}, {"text", request.sentence_text}, {"keyframes", keyframes}});
}

std::string RemoteAudioDescriber::describe(const knowledge::AudioWindow& window) {
  return client_->complete("describe_audio", {{"t_start", window.t_start},
                                              {"t_end", window.t_end},
                                              {"sample_rate", window.sample_rate},
                                              {"rms", knowledge::rms(window.samples)}});
}

std::string RemoteOutliner::outline(std::span<const knowledge::SentenceUnit> sentences) {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& s : sentences) list.push_back({{"index", s.index}, {"text", s.text}});
  return client_->complete("outline", {{"sentences", list}});
}

}  // namespace mise::session
