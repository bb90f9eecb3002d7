#pragma once

#include <span>
#include <vector>

#include "mise/knowledge/types.hpp"

namespace mise::knowledge {

inline constexpr double kDefaultSceneThreshold = 0.2;

// Mean absolute difference between two descriptors of equal length.
double content_difference(const std::vector<double>& a, const std::vector<double>& b);

// Emits a cut at frame i's timestamp iff content_difference(frame i-1,
// frame i) > threshold. Requires >= 2 frames (EmptyInput), strictly
// increasing timestamps, equal descriptor lengths and threshold > 0
// (InvalidInput).
SceneCutList detect_scenes(std::span<const FrameRecord> frames, double threshold = kDefaultSceneThreshold);

// Content hash stored with each keyframe reference.
std::string frame_hash(const FrameRecord& frame);

struct KeyframeAssignment {
  std::vector<SentenceUnit> sentences;
  std::vector<Warning> warnings;
};

// For every scene overlapping a sentence's interval with positive length,
// picks the frame inside the overlap nearest its midpoint (earlier frame on
// ties). A sentence with no frames in its interval gets no keyframes and a
// warning.
KeyframeAssignment assign_keyframes(std::vector<SentenceUnit> sentences, const SceneCutList& cuts,
                                    std::span<const FrameRecord> frames);

}  // namespace mise::knowledge
