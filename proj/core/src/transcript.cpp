#include "mise/knowledge/transcript.hpp"

#include <cmath>

#include "mise/common/error.hpp"
#include "mise/common/text.hpp"

namespace mise::knowledge {

bool ends_sentence(const std::string& word) {
  auto i = word.size();
  while (i > 0 && (word[i - 1] == '"' || word[i - 1] == '\'' || word[i - 1] == ')' || word[i - 1] == ']')) --i;
  if (i == 0) return false;
  const char c = word[i - 1];
  return c == '.' || c == '!' || c == '?';
}

std::vector<SentenceUnit> segment_transcript(const TimedTranscript& transcript, const SegmentOptions& opts) {
  std::vector<Word> words;
  words.reserve(transcript.words.size());
  for (const auto& w : transcript.words) {
    auto t = text::trim(w.text);
    if (!t.empty()) words.push_back({std::move(t), w.start, w.end});
  }
  if (words.empty()) throw Error(ErrorCode::EmptyInput, "transcript has no words");

  for (std::size_t i = 0; i < words.size(); ++i) {
    const auto& w = words[i];
    const auto where = "word " + std::to_string(i) + " ('" + w.text + "')";
    if (!std::isfinite(w.start) || !std::isfinite(w.end) || w.start < 0) {
      throw Error(ErrorCode::MalformedTranscript, where + ": invalid time");
    }
    if (w.start > w.end) throw Error(ErrorCode::MalformedTranscript, where + ": start after end");
    if (i > 0 && (w.start < words[i - 1].start || w.end < words[i - 1].end)) {
      throw Error(ErrorCode::MalformedTranscript, where + ": times decrease");
    }
  }

  std::vector<SentenceUnit> units;
  std::vector<std::string> current;
  double unit_start = words.front().start;
  for (std::size_t i = 0; i < words.size(); ++i) {
    current.push_back(words[i].text);
    const bool last = i + 1 == words.size();
    const bool boundary =
        last || ends_sentence(words[i].text) || (words[i + 1].start - words[i].end) >= opts.gap_seconds;
    if (!boundary) continue;

    SentenceUnit u;
    u.index = units.size();
    u.text = text::join(current, " ");
    u.t_start = unit_start;
    u.t_end = words[i].end;
    if (!(u.t_start < u.t_end)) {
      throw Error(ErrorCode::MalformedTranscript, "sentence " + std::to_string(u.index) + " has zero duration");
    }
    units.push_back(std::move(u));
    current.clear();
    if (!last) unit_start = words[i + 1].start;
  }
  return units;
}

}  // namespace mise::knowledge
