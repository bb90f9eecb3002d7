#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "mise/knowledge/types.hpp"
#include "mise/memory/store.hpp"

namespace mise::testkit {

using Rng = std::mt19937_64;

// A valid RecipeKnowledge with random sizes, times and text (including
// quotes, backslashes and non-ASCII characters).
knowledge::RecipeKnowledge random_knowledge(Rng& rng);

// Frames with piecewise-constant descriptors plus small noise. Each
// injected cut changes every descriptor element by at least `jump`.
struct SyntheticStream {
  std::vector<knowledge::FrameRecord> frames;
  std::vector<double> injected_cuts;
};
SyntheticStream synthetic_stream(Rng& rng, std::size_t frame_count, std::size_t cut_count, double noise = 0.02,
                                 double jump = 0.3);

// Records drawn from a small stopword-free vocabulary so scores tie often.
std::vector<memory::MemoryRecord> random_records(Rng& rng, std::size_t n);
std::string random_query(Rng& rng);

// Brute-force retrieval: scores every record independently of the library
// (shared distinct words / (1 + decay * age)), sorts the whole store by
// score then record id, both descending, and keeps the first k.
std::vector<std::uint64_t> brute_force_top_k(const std::vector<memory::MemoryRecord>& records,
                                             const std::string& query, std::size_t k, double decay);

// A recipe whose sentences carry distinct content words per step.
knowledge::RecipeKnowledge demo_recipe();

}  // namespace mise::testkit
