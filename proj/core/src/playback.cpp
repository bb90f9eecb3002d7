#include "mise/media/playback.hpp"

#include <algorithm>

namespace mise::media {

std::string_view to_string(PlaybackStatus s) noexcept {
  switch (s) {
    case PlaybackStatus::Stopped: return "stopped";
    case PlaybackStatus::Playing: return "playing";
    case PlaybackStatus::Paused: return "paused";
  }
  return "?";
}

std::string_view to_string(MediaCommand c) noexcept {
  switch (c) {
    case MediaCommand::Play: return "play";
    case MediaCommand::Pause: return "pause";
    case MediaCommand::Resume: return "resume";
    case MediaCommand::Replay: return "replay";
    case MediaCommand::Stop: return "stop";
  }
  return "?";
}

std::optional<PlaybackStatus> parse_playback_status(std::string_view s) noexcept {
  for (auto st : {PlaybackStatus::Stopped, PlaybackStatus::Playing, PlaybackStatus::Paused}) {
    if (to_string(st) == s) return st;
  }
  return std::nullopt;
}

std::optional<MediaCommand> parse_media_command(std::string_view s) noexcept {
  for (auto c : {MediaCommand::Play, MediaCommand::Pause, MediaCommand::Resume, MediaCommand::Replay,
                 MediaCommand::Stop}) {
    if (to_string(c) == s) return c;
  }
  return std::nullopt;
}

ControlOutcome control(MediaCommand cmd, const PlaybackState& pb, const std::vector<SegmentRef>& segments) {
  auto reject = [&](std::string why) { return ControlOutcome{pb, false, std::move(why)}; };
  PlaybackState next = pb;
  switch (cmd) {
    case MediaCommand::Play:
      if (!segments.empty()) {
        next.queue = segments;
      } else if (pb.queue.empty()) {
        return reject("nothing to play");
      }
      next.current = 0;
      next.position = next.queue.front().t_start;
      next.status = PlaybackStatus::Playing;
      return {next, true, {}};
    case MediaCommand::Pause:
      if (pb.status != PlaybackStatus::Playing) return reject("pause requires playing");
      next.status = PlaybackStatus::Paused;
      return {next, true, {}};
    case MediaCommand::Resume:
      if (pb.queue.empty()) return reject("resume with an empty queue");
      if (pb.status != PlaybackStatus::Paused) return reject("resume requires paused");
      next.status = PlaybackStatus::Playing;
      return {next, true, {}};
    case MediaCommand::Replay:
      if (pb.queue.empty()) return reject("replay with an empty queue");
      next.current = std::min(pb.current, pb.queue.size() - 1);
      next.position = next.queue[next.current].t_start;
      next.status = PlaybackStatus::Playing;
      return {next, true, {}};
    case MediaCommand::Stop:
      return {PlaybackState{}, true, {}};
  }
  return reject("unknown command");
}

PlaybackState advance_playback(const PlaybackState& pb, double seconds) {
  PlaybackState next = pb;
  if (next.status != PlaybackStatus::Playing || next.queue.empty()) return next;
  double remaining = seconds;
  while (remaining > 0) {
    const auto& seg = next.queue[next.current];
    const double left = seg.t_end - next.position;
    if (remaining < left) {
      next.position += remaining;
      return next;
    }
    remaining -= left;
    if (next.current + 1 == next.queue.size()) {
      next.position = seg.t_end;
      next.status = PlaybackStatus::Stopped;
      return next;
    }
    remaining -= kSegmentSeparatorSeconds;
    ++next.current;
    next.position = next.queue[next.current].t_start;
  }
  return next;
}

}  // namespace mise::media
