#pragma once

#include <atomic>
#include <functional>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "mise/monitor/monitor.hpp"
#include "mise/session/session.hpp"

namespace mise::session {

// Client -> engine, one JSON object per line:
//   {"type":"utterance","text":"What's my next step?"}
//   {"type":"frames","frames":[{"t":12.0,"d":[0.1,0.4],"image":"f/0120.jpg"}]}
//   {"type":"command","command":"pause"}          play|pause|resume|replay|stop
//   {"type":"skip","step":1}
//   {"type":"config","tts_speed":1.5}
//   {"type":"advance","t":4.0}                     simulated clock only
//   {"type":"scene","reply":"action: ...\nstep: 2"} scripted perceiver only
//   {"type":"bye"}
// Engine -> client: the session's outbound messages, one per line.
struct ClientMessage {
  std::string type;
  nlohmann::json body;
};

// Throws ParseError for malformed lines, unknown types or missing fields.
ClientMessage parse_client_message(std::string_view line);

struct ServerOptions {
  bool simulated_clock = false;
  // Wall-clock mode: how often the loop wakes to fire due ticks.
  std::chrono::milliseconds poll{20};
};

// Applies client messages to one session in arrival order. All session
// mutation happens on the thread calling run().
class SessionServer {
 public:
  // `scene_target` receives "scene" messages; without it they are rejected.
  SessionServer(Session& session, ServerOptions options, monitor::ScriptedPerceiver* scene_target = nullptr)
      : session_(session), options_(options), scene_target_(scene_target) {}

  // Returns false after "bye".
  bool handle(const ClientMessage& msg);
  // Parses and handles one line, reporting bad input on the stream.
  bool handle_line(std::string_view line);

  // Event loop. `read_line` blocks and returns nullopt at end of input; it
  // runs on a separate reader thread in wall-clock mode. Every outbound
  // message is passed to `write_line` without a trailing newline.
  void run(const std::function<std::optional<std::string>()>& read_line,
           const std::function<void(const std::string&)>& write_line);

 private:
  void flush(const std::function<void(const std::string&)>& write_line);

  Session& session_;
  ServerOptions options_;
  monitor::ScriptedPerceiver* scene_target_;
  SessionTime wall_offset_{0};
};

// Blocks until one TCP client connects on 127.0.0.1:`port`; returns the
// connected socket. Throws IoError.
int accept_one(int port);

// Line IO over a connected socket.
std::optional<std::string> read_socket_line(int fd, std::string& buffer);
void write_socket_line(int fd, const std::string& line);

}  // namespace mise::session
