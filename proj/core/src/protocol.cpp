#include "mise/session/protocol.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <condition_variable>
#include <cstring>
#include <deque>
#include <mutex>
#include <set>
#include <thread>

#include "mise/common/error.hpp"
#include "mise/knowledge/io.hpp"

namespace mise::session {
namespace {

const std::set<std::string> kTypes = {"utterance", "frames", "command", "skip", "config", "advance", "scene", "bye"};

void require(const nlohmann::json& j, const char* key, nlohmann::json::value_t type) {
  if (!j.contains(key)) throw Error(ErrorCode::ParseError, std::string("missing field ") + key);
  const auto t = j.at(key).type();
  const bool number_ok = type == nlohmann::json::value_t::number_float &&
                         (t == nlohmann::json::value_t::number_integer || t == nlohmann::json::value_t::number_unsigned);
  const bool unsigned_ok = type == nlohmann::json::value_t::number_unsigned && t == nlohmann::json::value_t::number_integer &&
                           j.at(key).get<long long>() >= 0;
  if (t != type && !number_ok && !unsigned_ok) throw Error(ErrorCode::ParseError, std::string("bad field ") + key);
}

// Single-producer channel between the reader thread and the loop.
class LineChannel {
 public:
  void push(std::optional<std::string> line) {
    {
      std::lock_guard lock(mutex_);
      lines_.push_back(std::move(line));
    }
    cv_.notify_one();
  }

  // Empty optional: timed out. Inner nullopt: end of input.
  std::optional<std::optional<std::string>> pop(std::chrono::milliseconds wait) {
    std::unique_lock lock(mutex_);
    if (!cv_.wait_for(lock, wait, [&] { return !lines_.empty(); })) return std::nullopt;
    auto line = std::move(lines_.front());
    lines_.pop_front();
    return line;
  }

 private:
  std::mutex mutex_;
  std::condition_variable cv_;
  std::deque<std::optional<std::string>> lines_;
};

}  // namespace

ClientMessage parse_client_message(std::string_view line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
    throw Error(ErrorCode::ParseError, "message needs a string \"type\"");
  ClientMessage msg{j["type"].get<std::string>(), j};
  if (!kTypes.contains(msg.type)) throw Error(ErrorCode::ParseError, "unknown message type " + msg.type);
  using V = nlohmann::json::value_t;
  if (msg.type == "utterance") require(j, "text", V::string);
  if (msg.type == "frames") require(j, "frames", V::array);
  if (msg.type == "command") require(j, "command", V::string);
  if (msg.type == "skip") require(j, "step", V::number_unsigned);
  if (msg.type == "config") require(j, "tts_speed", V::number_float);
  if (msg.type == "advance") require(j, "t", V::number_float);
  if (msg.type == "scene") require(j, "reply", V::string);
  return msg;
}

bool SessionServer::handle(const ClientMessage& msg) {
  const auto& j = msg.body;
  if (msg.type == "bye") return false;
  if (msg.type == "utterance") {
    session_.ingest_utterance(j["text"].get<std::string>());
  } else if (msg.type == "frames") {
    std::vector<knowledge::FrameRecord> frames;
    for (const auto& f : j["frames"]) {
      knowledge::FrameRecord r;
      r.timestamp = f.at("t").get<double>();
      r.descriptor = f.value("d", std::vector<double>{});
      r.image_path = f.value("image", std::string());
      frames.push_back(std::move(r));
    }
    session_.ingest_frames(std::move(frames));
  } else if (msg.type == "command") {
    auto cmd = media::parse_media_command(j["command"].get<std::string>());
    if (!cmd) throw Error(ErrorCode::InvalidCommand, "unknown command " + j["command"].get<std::string>());
    session_.command(*cmd);
  } else if (msg.type == "skip") {
    session_.declare_skip(j["step"].get<std::size_t>());
  } else if (msg.type == "config") {
    session_.set_tts_speed(j["tts_speed"].get<double>());
  } else if (msg.type == "advance") {
    if (!options_.simulated_clock) throw Error(ErrorCode::InvalidInput, "advance needs the simulated clock");
    session_.advance_to(from_seconds(j["t"].get<double>()));
  } else if (msg.type == "scene") {
    if (!scene_target_) throw Error(ErrorCode::InvalidInput, "scene messages need the scripted perceiver");
    scene_target_->set_scene(j["reply"].get<std::string>());
  }
  return true;
}

bool SessionServer::handle_line(std::string_view line) {
  if (line.find_first_not_of(" \t\r") == std::string_view::npos) return true;
  try {
    return handle(parse_client_message(line));
  } catch (const Error& e) {
    session_.emit_error(e.code(), e.what());
  } catch (const std::exception& e) {
    session_.emit_error(ErrorCode::ParseError, e.what());
  }
  return true;
}

void SessionServer::flush(const std::function<void(const std::string&)>& write_line) {
  for (const auto& m : session_.drain_outbox()) write_line(m.dump());
}

void SessionServer::run(const std::function<std::optional<std::string>()>& read_line,
                        const std::function<void(const std::string&)>& write_line) {
  flush(write_line);
  if (options_.simulated_clock) {
    while (auto line = read_line()) {
      const bool more = handle_line(*line);
      flush(write_line);
      if (!more) break;
    }
    return;
  }

  const SteadyClock clock;
  wall_offset_ = session_.now();
  auto channel = std::make_shared<LineChannel>();
  std::thread reader([channel, read_line] {
    while (auto line = read_line()) channel->push(std::move(line));
    channel->push(std::nullopt);
  });
  bool open = true;
  while (open) {
    auto item = channel->pop(options_.poll);
    const auto now = wall_offset_ + clock.now();
    if (!item) {
      session_.advance_to(now);
    } else if (!*item) {
      open = false;
    } else {
      session_.advance_to(now, false);
      open = handle_line(**item);
    }
    flush(write_line);
  }
  // After "bye" the reader may still be blocked on input; it owns its
  // channel and ends with the stream.
  reader.detach();
}

int accept_one(int port) {
  const int server = ::socket(AF_INET, SOCK_STREAM, 0);
  if (server < 0) throw Error(ErrorCode::IoError, std::string("socket: ") + std::strerror(errno));
  int yes = 1;
  ::setsockopt(server, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(static_cast<std::uint16_t>(port));
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  if (::bind(server, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0 || ::listen(server, 1) < 0) {
    const std::string err = std::strerror(errno);
    ::close(server);
    throw Error(ErrorCode::IoError, "listen on port " + std::to_string(port) + ": " + err);
  }
  const int client = ::accept(server, nullptr, nullptr);
  ::close(server);
  if (client < 0) throw Error(ErrorCode::IoError, std::string("accept: ") + std::strerror(errno));
  return client;
}

std::optional<std::string> read_socket_line(int fd, std::string& buffer) {
  for (;;) {
    const auto nl = buffer.find('\n');
    if (nl != std::string::npos) {
      auto line = buffer.substr(0, nl);
      buffer.erase(0, nl + 1);
      return line;
    }
    char chunk[4096];
    const auto n = ::read(fd, chunk, sizeof chunk);
    if (n <= 0) {
      if (buffer.empty()) return std::nullopt;
      auto line = std::move(buffer);
      buffer.clear();
      return line;
    }
    buffer.append(chunk, static_cast<std::size_t>(n));
  }
}

void write_socket_line(int fd, const std::string& line) {
  const std::string data = line + "\n";
  std::size_t sent = 0;
  while (sent < data.size()) {
    const auto n = ::write(fd, data.data() + sent, data.size() - sent);
    if (n <= 0) throw Error(ErrorCode::IoError, "connection closed");
    sent += static_cast<std::size_t>(n);
  }
}

}  // namespace mise::session
