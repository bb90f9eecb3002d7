#pragma once

#include <vector>

#include "mise/knowledge/types.hpp"

namespace mise::knowledge {

struct SegmentOptions {
  // A pause at least this long between words closes a sentence.
  double gap_seconds = 1.5;
};

// True when the word ends with sentence-final punctuation, ignoring trailing
// closing quotes or brackets.
bool ends_sentence(const std::string& word);

// Splits a word-timed transcript into sentence units (descriptions and
// keyframes empty). Unit text is the unit's words joined by single spaces.
// Throws EmptyInput on no words, MalformedTranscript on non-monotone or
// negative times or a zero-length unit.
std::vector<SentenceUnit> segment_transcript(const TimedTranscript& transcript, const SegmentOptions& opts = {});

}  // namespace mise::knowledge
