#include "mise/knowledge/scenes.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

#include "mise/common/error.hpp"
#include "mise/common/text.hpp"

namespace mise::knowledge {

double content_difference(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::InvalidInput, "descriptor lengths differ");
  if (a.empty()) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += std::fabs(a[i] - b[i]);
  return sum / static_cast<double>(a.size());
}

SceneCutList detect_scenes(std::span<const FrameRecord> frames, double threshold) {
  if (frames.size() < 2) throw Error(ErrorCode::EmptyInput, "scene detection needs at least 2 frames");
  if (!(threshold > 0)) throw Error(ErrorCode::InvalidInput, "scene threshold must be > 0");

  SceneCutList out;
  out.threshold = threshold;
  for (std::size_t i = 1; i < frames.size(); ++i) {
    if (!(frames[i].timestamp > frames[i - 1].timestamp)) {
      throw Error(ErrorCode::InvalidInput, "frame timestamps must be strictly increasing");
    }
    if (content_difference(frames[i - 1].descriptor, frames[i].descriptor) > threshold) {
      out.cuts.push_back(frames[i].timestamp);
    }
  }
  return out;
}

std::string frame_hash(const FrameRecord& frame) {
  std::string bytes;
  bytes.resize(frame.descriptor.size() * sizeof(double));
  if (!frame.descriptor.empty()) std::memcpy(bytes.data(), frame.descriptor.data(), bytes.size());
  bytes += frame.image_path;
  return text::fnv1a_hex(bytes);
}

KeyframeAssignment assign_keyframes(std::vector<SentenceUnit> sentences, const SceneCutList& cuts,
                                    std::span<const FrameRecord> frames) {
  // Scene k spans [bounds[k], bounds[k+1]).
  std::vector<double> bounds;
  bounds.push_back(-std::numeric_limits<double>::infinity());
  bounds.insert(bounds.end(), cuts.cuts.begin(), cuts.cuts.end());
  bounds.push_back(std::numeric_limits<double>::infinity());

  KeyframeAssignment out;
  for (auto& s : sentences) {
    s.keyframes.clear();
    for (std::size_t k = 0; k + 1 < bounds.size(); ++k) {
      const double lo = std::max(s.t_start, bounds[k]);
      const double hi = std::min(s.t_end, bounds[k + 1]);
      if (!(hi > lo)) continue;
      // The scene's own end is exclusive, the sentence's end is inclusive.
      const bool hi_inclusive = s.t_end < bounds[k + 1];
      const double mid = (lo + hi) / 2.0;
      const FrameRecord* best = nullptr;
      double best_dist = 0.0;
      for (const auto& f : frames) {
        if (f.timestamp < lo) continue;
        if (f.timestamp > hi || (!hi_inclusive && f.timestamp == hi)) break;
        const double d = std::fabs(f.timestamp - mid);
        if (!best || d < best_dist) {
          best = &f;
          best_dist = d;
        }
      }
      if (best) s.keyframes.push_back({best->timestamp, frame_hash(*best)});
    }
    if (s.keyframes.empty()) {
      out.warnings.push_back({s.index, "no_frames", "no frames fall inside the sentence interval"});
    }
  }
  out.sentences = std::move(sentences);
  return out;
}

}  // namespace mise::knowledge
