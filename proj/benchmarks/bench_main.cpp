#include <benchmark/benchmark.h>

#include <random>

#include "mise/knowledge/scenes.hpp"
#include "mise/knowledge/transcript.hpp"
#include "mise/memory/store.hpp"
#include "mise/orchestrator/transition.hpp"

using namespace mise;

namespace {

const char* kWords[] = {"boil", "water", "salt", "pasta", "stir", "garlic", "onion", "chop",
                        "pan",  "oil",   "drain", "sauce", "pepper", "basil", "simmer", "heat"};

void BM_TransitionLookup(benchmark::State& state) {
  const auto& table = TransitionTable::standard();
  for (auto _ : state)
    for (auto s : kAllStates)
      for (auto e : kAllEvents) benchmark::DoNotOptimize(table.lookup(s, e));
  state.SetItemsProcessed(state.iterations() * kAllStates.size() * kAllEvents.size());
}
BENCHMARK(BM_TransitionLookup);

void BM_Retrieve(benchmark::State& state) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::size_t> pick(0, std::size(kWords) - 1);
  memory::MemoryStore store;
  for (std::int64_t i = 0; i < state.range(0); ++i) {
    memory::MemoryRecord r;
    r.timestamp = SessionTime{i * 100};
    r.text = std::string(kWords[pick(rng)]) + " the " + kWords[pick(rng)] + " " + kWords[pick(rng)];
    store.append(std::move(r));
  }
  const memory::RecencyLexicalScorer scorer;
  for (auto _ : state) benchmark::DoNotOptimize(memory::retrieve(store, "did I salt the pasta water", 5, scorer));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Retrieve)->RangeMultiplier(4)->Range(64, 16384)->Complexity();

void BM_SegmentTranscript(benchmark::State& state) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::size_t> pick(0, std::size(kWords) - 1);
  knowledge::TimedTranscript t;
  double clock = 0.0;
  for (std::int64_t i = 0; i < state.range(0); ++i) {
    std::string w = kWords[pick(rng)];
    if (i % 9 == 8) w += '.';
    t.words.push_back({w, clock, clock + 0.3});
    clock += 0.4;
  }
  for (auto _ : state) benchmark::DoNotOptimize(knowledge::segment_transcript(t));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SegmentTranscript)->Range(256, 65536);

void BM_DetectScenes(benchmark::State& state) {
  std::mt19937_64 rng(13);
  std::normal_distribution<double> noise(0.0, 0.02);
  std::vector<knowledge::FrameRecord> frames;
  std::vector<double> base(8, 0.2);
  for (std::int64_t i = 0; i < state.range(0); ++i) {
    if (i % 120 == 119)
      for (auto& b : base) b = b > 0.5 ? 0.2 : 0.8;
    knowledge::FrameRecord f;
    f.timestamp = static_cast<double>(i) / 30.0;
    for (double b : base) f.descriptor.push_back(b + noise(rng));
    frames.push_back(std::move(f));
  }
  for (auto _ : state) benchmark::DoNotOptimize(knowledge::detect_scenes(frames));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DetectScenes)->Range(1024, 65536);

}  // namespace

BENCHMARK_MAIN();
