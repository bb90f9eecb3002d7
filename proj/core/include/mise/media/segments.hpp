#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "mise/knowledge/types.hpp"

namespace mise::media {

enum class SegmentReason : std::uint8_t { UserRequest, ResponseEvidence };

std::string_view to_string(SegmentReason r) noexcept;

// Always exactly one sentence's interval.
struct SegmentRef {
  std::size_t sentence_index = 0;
  double t_start = 0.0;
  double t_end = 0.0;
  SegmentReason reason = SegmentReason::ResponseEvidence;

  bool operator==(const SegmentRef&) const = default;
};

SegmentRef segment_for(const knowledge::SentenceUnit& s, SegmentReason reason);

// Scores a free-text request against one sentence. Higher is better; the
// lexical mock counts shared content words.
class SentenceMatcher {
 public:
  virtual ~SentenceMatcher() = default;
  virtual double score(std::string_view request, const knowledge::SentenceUnit& sentence) const = 0;
};

// Request words that only describe playback ("replay", "video", "part",
// ...) are ignored.
class LexicalMatcher final : public SentenceMatcher {
 public:
  double score(std::string_view request, const knowledge::SentenceUnit& sentence) const override;
};

inline constexpr double kMatchFloor = 1.0;

// The best-scoring sentence (lowest index on ties) extended to the maximal
// contiguous run of sentences with the same score. Throws NoSegmentFound
// when the best score is below the floor.
std::vector<SegmentRef> locate_segments(std::string_view request, const knowledge::RecipeKnowledge& knowledge,
                                        const SentenceMatcher& matcher, double floor = kMatchFloor);

// Evidence segments per rendered response.
class EvidenceRegistry {
 public:
  void record(std::uint64_t response_id, std::vector<SegmentRef> segments);
  // Throws NoSegmentFound for an unknown response id.
  std::vector<SegmentRef> locate(std::uint64_t response_id) const;
  bool contains(std::uint64_t response_id) const { return by_response_.contains(response_id); }

 private:
  std::map<std::uint64_t, std::vector<SegmentRef>> by_response_;
};

// Picks evidence for a response from the candidate slices: slices scored by
// shared words with the query and response text, best contiguous run (in
// sentence-index order) of the top score; the first slice when nothing
// overlaps. Empty when there are no slices.
std::vector<SegmentRef> select_evidence(const std::vector<knowledge::SentenceUnit>& slices,
                                        std::string_view query, std::string_view response_text);

}  // namespace mise::media
