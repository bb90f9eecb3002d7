#include <gtest/gtest.h>

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <deque>
#include <thread>

#include "mise/common/error.hpp"
#include "mise/session/protocol.hpp"
#include "rig.hpp"

using namespace mise;
using namespace mise::session;
using mise::testkit::Rig;

namespace {

std::vector<nlohmann::json> run_lines(Rig& rig, std::deque<std::string> lines, bool simulated = true) {
  ServerOptions opts;
  opts.simulated_clock = simulated;
  SessionServer server(rig.s(), opts, &rig.perceiver);
  std::vector<nlohmann::json> out;
  server.run(
      [&]() -> std::optional<std::string> {
        if (lines.empty()) return std::nullopt;
        auto l = lines.front();
        lines.pop_front();
        return l;
      },
      [&](const std::string& l) { out.push_back(nlohmann::json::parse(l)); });
  return out;
}

// What a console keeps: the displayed state and the scrollback.
struct View {
  std::string state = "S0";
  std::string playback = "stopped";
  std::vector<std::string> scrollback;

  void apply(const nlohmann::json& m) {
    const auto type = m.at("type").get<std::string>();
    if (type == "state") state = m.at("to").get<std::string>();
    if (type == "playback") playback = m.at("status").get<std::string>();
    if (type == "response") scrollback.push_back("response " + m.at("text").get<std::string>());
    if (type == "alert") scrollback.push_back("alert " + m.at("event").get<std::string>());
    if (type == "error") scrollback.push_back("error " + m.at("code").get<std::string>());
  }
};

}  // namespace

TEST(Protocol, ParsesEveryClientMessageType) {
  const char* ok[] = {
      R"({"type":"utterance","text":"hi"})",
      R"({"type":"frames","frames":[{"t":1.0,"d":[0.1]}]})",
      R"({"type":"command","command":"pause"})",
      R"({"type":"skip","step":1})",
      R"({"type":"config","tts_speed":1.5})",
      R"({"type":"advance","t":4.0})",
      R"({"type":"scene","reply":"action: idle"})",
      R"({"type":"bye"})",
  };
  for (const auto* l : ok) EXPECT_NO_THROW(parse_client_message(l)) << l;
  const char* bad[] = {"not json", R"({"text":"no type"})", R"({"type":"dance"})", R"({"type":"utterance"})",
                       R"({"type":"skip","step":"one"})", R"({"type":"advance"})", "[]"};
  for (const auto* l : bad) EXPECT_THROW(parse_client_message(l), Error) << l;
}

TEST(Protocol, SimulatedSessionOverLines) {
  Rig rig;
  const auto out = run_lines(rig, {
                                      R"({"type":"advance","t":1.0})",
                                      R"({"type":"utterance","text":"What's the next step?"})",
                                      R"({"type":"scene","reply":"action: cooking spaghetti\nstep: 2"})",
                                      R"({"type":"advance","t":2.0})",
                                      R"({"type":"config","tts_speed":2.0})",
                                      R"({"type":"command","command":"dance"})",
                                      "garbage",
                                      R"({"type":"bye"})",
                                      R"({"type":"utterance","text":"never read"})",
                                  });
  std::uint64_t prev_seq = 0;
  std::int64_t prev_t = 0;
  std::map<std::string, int> kinds;
  for (const auto& m : out) {
    EXPECT_GT(m.at("seq").get<std::uint64_t>(), prev_seq);
    EXPECT_GE(m.at("t_ms").get<std::int64_t>(), prev_t);
    prev_seq = m.at("seq").get<std::uint64_t>();
    prev_t = m.at("t_ms").get<std::int64_t>();
    ++kinds[m.at("type").get<std::string>()];
  }
  EXPECT_EQ(kinds["alert"], 1);
  EXPECT_EQ(kinds["response"], 2);
  EXPECT_EQ(kinds["error"], 2);
  EXPECT_EQ(rig.s().state(), DialogueState::ProblemSolving);
  EXPECT_DOUBLE_EQ(rig.s().config().tts_speed, 2.0);
  for (const auto& m : rig.s().trace()) EXPECT_NE(m.utterance, "never read");
}

TEST(Protocol, OutboundMessagesCarryTheirFields) {
  Rig rig;
  const auto out = run_lines(rig, {
                                      R"({"type":"utterance","text":"How do I chop the onions?"})",
                                      R"({"type":"utterance","text":"Play the video"})",
                                      R"({"type":"scene","reply":"action: not boiling\nstep: 0"})",
                                      R"({"type":"advance","t":2.0})",
                                      R"({"type":"utterance","text":"Tell me more"})",
                                      R"({"type":"advance","t":3.0})",
                                  });
  const std::map<std::string, std::vector<std::string>> required = {
      {"state", {"from", "to", "event"}},
      {"response", {"response_id", "state", "template", "text", "evidence", "sources"}},
      {"alert", {"event", "judgment_id", "tick_id", "steps"}},
      {"playback", {"status", "segment", "position", "queue"}},
      {"tts", {"response_id", "audio_ref", "speed"}},
      {"error", {"code", "message"}},
  };
  std::set<std::string> seen;
  for (const auto& m : out) {
    const auto type = m.at("type").get<std::string>();
    ASSERT_TRUE(required.contains(type)) << "unexpected message type " << type;
    seen.insert(type);
    for (const auto& key : required.at(type)) EXPECT_TRUE(m.contains(key)) << type << " lacks " << key;
  }
  EXPECT_TRUE(seen.contains("state"));
  EXPECT_TRUE(seen.contains("response"));
  EXPECT_TRUE(seen.contains("alert"));
  EXPECT_TRUE(seen.contains("playback"));
  EXPECT_TRUE(seen.contains("tts"));
}

TEST(Protocol, ReplayingTheStreamRebuildsTheView) {
  Rig rig;
  const auto out = run_lines(rig, {
                                      R"({"type":"utterance","text":"Is it cooked?"})",
                                      R"({"type":"utterance","text":"Play the video"})",
                                      R"({"type":"utterance","text":"Pause"})",
                                      R"({"type":"utterance","text":"That's wrong"})",
                                  });
  View live, replayed;
  for (const auto& m : out) live.apply(m);
  for (const auto& m : out) replayed.apply(nlohmann::json::parse(m.dump()));
  EXPECT_EQ(live.state, std::string(code(rig.s().state())));
  EXPECT_EQ(live.playback, "paused");
  EXPECT_EQ(replayed.state, live.state);
  EXPECT_EQ(replayed.scrollback, live.scrollback);
}

TEST(Protocol, AdvanceAndSceneNeedTheirModes) {
  Rig rig;
  ServerOptions wall;
  SessionServer no_scene(rig.s(), wall, nullptr);
  no_scene.handle_line(R"({"type":"advance","t":1.0})");
  no_scene.handle_line(R"({"type":"scene","reply":"action: x"})");
  std::size_t errors = 0;
  for (const auto& m : rig.s().drain_outbox()) errors += m["type"] == "error";
  EXPECT_EQ(errors, 2u);
  EXPECT_EQ(rig.s().now(), SessionTime{0});
}

TEST(Protocol, WallClockLoopFiresTicks) {
  SessionConfig cfg;
  cfg.tick_period = SessionTime{50};
  Rig rig(cfg);
  std::deque<std::string> lines = {R"({"type":"utterance","text":"What's the next step?"})"};
  ServerOptions opts;
  opts.poll = std::chrono::milliseconds(5);
  SessionServer server(rig.s(), opts, &rig.perceiver);
  std::vector<std::string> out;
  int reads = 0;
  server.run(
      [&]() -> std::optional<std::string> {
        if (reads++ == 0) return lines.front();
        std::this_thread::sleep_for(std::chrono::milliseconds(300));
        return std::nullopt;
      },
      [&](const std::string& l) { out.push_back(l); });
  EXPECT_GE(rig.s().ticks(), 3u);
  EXPECT_FALSE(out.empty());
}

TEST(Protocol, OneTcpClient) {
  Rig rig;
  int port = 0;
  {
    // Find a free port.
    const int probe = ::socket(AF_INET, SOCK_STREAM, 0);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    ASSERT_EQ(::bind(probe, reinterpret_cast<sockaddr*>(&addr), sizeof addr), 0);
    socklen_t len = sizeof addr;
    ::getsockname(probe, reinterpret_cast<sockaddr*>(&addr), &len);
    port = ntohs(addr.sin_port);
    ::close(probe);
  }

  std::vector<std::string> received;
  std::thread client([&] {
    int fd = -1;
    for (int attempt = 0; attempt < 200 && fd < 0; ++attempt) {
      fd = ::socket(AF_INET, SOCK_STREAM, 0);
      sockaddr_in addr{};
      addr.sin_family = AF_INET;
      addr.sin_port = htons(static_cast<std::uint16_t>(port));
      addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
      if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
        ::close(fd);
        fd = -1;
        std::this_thread::sleep_for(std::chrono::milliseconds(10));
      }
    }
    ASSERT_GE(fd, 0);
    write_socket_line(fd, R"({"type":"utterance","text":"What's the next step?"})");
    write_socket_line(fd, R"({"type":"bye"})");
    std::string buffer;
    while (auto line = read_socket_line(fd, buffer)) received.push_back(*line);
    ::close(fd);
  });

  const int fd = accept_one(port);
  ServerOptions opts;
  opts.simulated_clock = true;
  SessionServer server(rig.s(), opts, &rig.perceiver);
  auto buffer = std::make_shared<std::string>();
  server.run([fd, buffer] { return read_socket_line(fd, *buffer); },
             [fd](const std::string& l) { write_socket_line(fd, l); });
  ::shutdown(fd, SHUT_RDWR);
  ::close(fd);
  client.join();

  ASSERT_FALSE(received.empty());
  bool response = false;
  for (const auto& l : received) response = response || nlohmann::json::parse(l)["type"] == "response";
  EXPECT_TRUE(response);
  EXPECT_EQ(rig.s().state(), DialogueState::StepGuide);
}
