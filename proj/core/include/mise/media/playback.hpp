#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mise/media/segments.hpp"

namespace mise::media {

enum class PlaybackStatus : std::uint8_t { Stopped, Playing, Paused };
enum class MediaCommand : std::uint8_t { Play, Pause, Resume, Replay, Stop };

std::string_view to_string(PlaybackStatus s) noexcept;
std::string_view to_string(MediaCommand c) noexcept;
std::optional<PlaybackStatus> parse_playback_status(std::string_view s) noexcept;
std::optional<MediaCommand> parse_media_command(std::string_view s) noexcept;

// Spoken cue between consecutive segments of a multi-segment answer.
inline constexpr double kSegmentSeparatorSeconds = 0.5;

struct PlaybackState {
  PlaybackStatus status = PlaybackStatus::Stopped;
  std::vector<SegmentRef> queue;
  std::size_t current = 0;
  // Seconds on the source video timeline, inside queue[current].
  double position = 0.0;

  bool operator==(const PlaybackState&) const = default;

  const SegmentRef* current_segment() const { return current < queue.size() ? &queue[current] : nullptr; }
};

struct ControlOutcome {
  PlaybackState state;
  bool accepted = true;
  std::string error;
};

// Pure. play [segments] loads the queue (or restarts the existing one when
// no segments are given); pause needs playing; resume needs paused; replay
// restarts the current segment and needs a non-empty queue; stop clears the
// queue from any status. Invalid pairs return accepted=false and the input
// state unchanged.
ControlOutcome control(MediaCommand cmd, const PlaybackState& pb, const std::vector<SegmentRef>& segments = {});

// Advances a playing state by `seconds` of wall time, crossing into the next
// segment after the separator. Reaching the end stops playback and keeps
// the queue for replay.
PlaybackState advance_playback(const PlaybackState& pb, double seconds);

}  // namespace mise::media
