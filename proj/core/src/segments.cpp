#include "mise/media/segments.hpp"

#include <algorithm>
#include <set>

#include "mise/common/error.hpp"
#include "mise/common/text.hpp"

namespace mise::media {
namespace {

constexpr std::string_view kPlaybackWords[] = {"replay", "play",  "video", "part",   "clip",   "segment",
                                               "show",   "tells", "tell",  "again",  "recipe", "section",
                                               "bit",    "said",  "says",  "pause", "resume", "stop"};

std::set<std::string> request_tokens(std::string_view request) {
  auto tokens = text::content_token_set(request);
  for (auto w : kPlaybackWords) tokens.erase(std::string(w));
  return tokens;
}

// Maximal run of equal top score around the first argmax.
std::pair<std::size_t, std::size_t> best_run(const std::vector<double>& scores) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) best = i;
  }
  std::size_t lo = best;
  std::size_t hi = best;
  while (lo > 0 && scores[lo - 1] == scores[best]) --lo;
  while (hi + 1 < scores.size() && scores[hi + 1] == scores[best]) ++hi;
  return {lo, hi};
}

}  // namespace

std::string_view to_string(SegmentReason r) noexcept {
  return r == SegmentReason::UserRequest ? "user_request" : "response_evidence";
}

SegmentRef segment_for(const knowledge::SentenceUnit& s, SegmentReason reason) {
  return {s.index, s.t_start, s.t_end, reason};
}

double LexicalMatcher::score(std::string_view request, const knowledge::SentenceUnit& sentence) const {
  return static_cast<double>(text::shared_token_count(request_tokens(request), text::content_token_set(sentence.text)));
}

std::vector<SegmentRef> locate_segments(std::string_view request, const knowledge::RecipeKnowledge& knowledge,
                                        const SentenceMatcher& matcher, double floor) {
  if (knowledge.sentences.empty()) throw Error(ErrorCode::NoSegmentFound, "recipe has no sentences");
  std::vector<double> scores;
  scores.reserve(knowledge.sentences.size());
  for (const auto& s : knowledge.sentences) scores.push_back(matcher.score(request, s));

  const auto [lo, hi] = best_run(scores);
  if (scores[lo] < floor) {
    throw Error(ErrorCode::NoSegmentFound, "no part of the video matches '" + std::string(request) + "'");
  }
  std::vector<SegmentRef> out;
  for (auto i = lo; i <= hi; ++i) out.push_back(segment_for(knowledge.sentences[i], SegmentReason::UserRequest));
  return out;
}

void EvidenceRegistry::record(std::uint64_t response_id, std::vector<SegmentRef> segments) {
  by_response_[response_id] = std::move(segments);
}

std::vector<SegmentRef> EvidenceRegistry::locate(std::uint64_t response_id) const {
  auto it = by_response_.find(response_id);
  if (it == by_response_.end()) {
    throw Error(ErrorCode::NoSegmentFound, "unknown response " + std::to_string(response_id));
  }
  return it->second;
}

std::vector<SegmentRef> select_evidence(const std::vector<knowledge::SentenceUnit>& slices, std::string_view query,
                                        std::string_view response_text) {
  if (slices.empty()) return {};
  std::vector<const knowledge::SentenceUnit*> ordered;
  for (const auto& s : slices) ordered.push_back(&s);
  std::sort(ordered.begin(), ordered.end(), [](auto* a, auto* b) { return a->index < b->index; });
  ordered.erase(std::unique(ordered.begin(), ordered.end(), [](auto* a, auto* b) { return a->index == b->index; }),
                ordered.end());

  auto wanted = text::content_token_set(query);
  for (auto& t : text::content_token_set(response_text)) wanted.insert(t);

  std::vector<double> scores;
  for (auto* s : ordered) {
    scores.push_back(static_cast<double>(text::shared_token_count(wanted, text::content_token_set(s->text))));
  }
  auto [lo, hi] = best_run(scores);
  if (scores[lo] <= 0) hi = lo = 0;

  std::vector<SegmentRef> out;
  for (auto i = lo; i <= hi; ++i) {
    // A run only spans adjacent sentences of the recipe.
    if (i > lo && ordered[i]->index != ordered[i - 1]->index + 1) break;
    out.push_back(segment_for(*ordered[i], SegmentReason::ResponseEvidence));
  }
  return out;
}

}  // namespace mise::media
