#include <gtest/gtest.h>

#include <sstream>

#include "generators.hpp"
#include "mise/common/error.hpp"
#include "mise/memory/context.hpp"
#include "mise/memory/store.hpp"

using namespace mise;
using namespace mise::memory;

namespace {

MemoryRecord rec(RecordKind kind, std::int64_t t_ms, std::string text) {
  MemoryRecord r;
  r.kind = kind;
  r.timestamp = SessionTime{t_ms};
  r.text = std::move(text);
  if (kind == RecordKind::Observation) r.links.tick_id = 1;
  if (kind == RecordKind::Response) r.links.response_id = 1;
  return r;
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::IoError;
}

}  // namespace

TEST(Store, AssignsIncreasingIdsAndRejectsTimeTravel) {
  MemoryStore s;
  EXPECT_EQ(s.append(rec(RecordKind::Utterance, 0, "hello")), 1u);
  EXPECT_EQ(s.append(rec(RecordKind::Observation, 0, "pot")), 2u);
  EXPECT_EQ(code_of([&] { s.append(rec(RecordKind::Utterance, -1, "late")); }), ErrorCode::ClockViolation);
  EXPECT_EQ(s.size(), 2u);
  EXPECT_EQ(s.last_id(), 2u);
  EXPECT_EQ(s.count(RecordKind::Observation), 1u);
}

TEST(Store, LinkRequirementsAndIdempotentReplay) {
  MemoryStore s;
  auto obs = rec(RecordKind::Observation, 0, "x");
  obs.links.tick_id.reset();
  EXPECT_EQ(code_of([&] { s.append(obs); }), ErrorCode::InvalidInput);
  auto resp = rec(RecordKind::Response, 0, "x");
  resp.links.response_id.reset();
  EXPECT_EQ(code_of([&] { s.append(resp); }), ErrorCode::InvalidInput);

  auto r = rec(RecordKind::Utterance, 10, "one");
  r.record_id = s.append(r);
  EXPECT_EQ(s.append(r), r.record_id);
  EXPECT_EQ(s.size(), 1u);
  r.text = "changed";
  EXPECT_EQ(code_of([&] { s.append(r); }), ErrorCode::InvalidInput);
}

TEST(Store, SinkAndLoadRoundTrip) {
  std::stringstream sink;
  MemoryStore s;
  s.attach_sink(&sink);
  testkit::Rng rng(2);
  for (auto& r : testkit::random_records(rng, 50)) s.append(r);
  auto resp = rec(RecordKind::Response, 1000000, "answer");
  resp.links.step = 3;
  resp.links.sentences = {3, 4};
  resp.links.response_id = 12;
  s.append(resp);
  const auto loaded = MemoryStore::load(sink);
  EXPECT_EQ(loaded->snapshot(), s.snapshot());
}

TEST(Store, LatestIsOldestFirst) {
  MemoryStore s;
  for (int i = 0; i < 6; ++i) s.append(rec(i % 2 ? RecordKind::Response : RecordKind::Utterance, i, std::to_string(i)));
  const auto last = s.latest({RecordKind::Utterance}, 2);
  ASSERT_EQ(last.size(), 2u);
  EXPECT_EQ(last[0].text, "2");
  EXPECT_EQ(last[1].text, "4");
  EXPECT_EQ(s.latest({RecordKind::Utterance, RecordKind::Response}, 10).size(), 6u);
}

TEST(Retrieve, MatchesBruteForceIncludingTies) {
  testkit::Rng rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    const auto n = static_cast<std::size_t>(rng() % 201);
    const double decay = trial % 2 ? 0.0 : 0.05;
    MemoryStore store;
    auto records = testkit::random_records(rng, n);
    for (auto& r : records) r.record_id = store.append(r);
    RecencyLexicalScorer scorer(decay);
    const auto query = testkit::random_query(rng);
    const auto k = static_cast<std::size_t>(rng() % 30);
    std::vector<std::uint64_t> got;
    for (const auto& r : retrieve(store, query, k, scorer)) got.push_back(r.record_id);
    EXPECT_EQ(got, testkit::brute_force_top_k(records, query, k, decay)) << "trial " << trial;
  }
}

TEST(Retrieve, ScorerFormula) {
  RecencyLexicalScorer s(0.5);
  MemoryRecord r;
  r.record_id = 2;
  r.text = "Add the garlic and onions";
  EXPECT_DOUBLE_EQ(s.score("garlic onions", r, 4), 2.0 / 2.0);
  EXPECT_DOUBLE_EQ(s.score("the and", r, 2), 0.0);
  MemoryStore empty;
  EXPECT_TRUE(retrieve(empty, "x", 3, s).empty());
}

TEST(Context, SliceSelectionPerState) {
  const auto k = testkit::demo_recipe();
  monitor::ProgressState p;
  p.current_step = 2;
  using S = DialogueState;
  EXPECT_EQ(slice_sentences(S::StepGuide, EventKind::StepQuery, k, p, std::nullopt),
            (std::vector<std::size_t>{2, 3}));
  EXPECT_EQ(slice_sentences(S::FoodState, EventKind::FoodStateQuery, k, p, std::nullopt),
            std::vector<std::size_t>{2});
  EXPECT_EQ(slice_sentences(S::GeneralVisual, EventKind::GeneralVisualQuery, k, p, std::nullopt).size(), 7u);
  monitor::Judgment j;
  j.missed_steps = {0, 1};
  EXPECT_EQ(slice_sentences(S::ProblemSolving, EventKind::MissedStepDetected, k, p, j),
            (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_TRUE(slice_sentences(S::Idle, EventKind::Reset, k, p, std::nullopt).empty());
}

TEST(Context, LargerBudgetYieldsSuperset) {
  const auto k = testkit::demo_recipe();
  MemoryStore store;
  testkit::Rng rng(8);
  for (auto& r : testkit::random_records(rng, 40)) store.append(r);
  RecencyLexicalScorer scorer;
  ContextAssembler a(store, k, scorer);
  ContextRequest req;
  req.state = DialogueState::StepGuide;
  req.trigger = EventKind::StepQuery;
  req.query = "how much salt for the pasta water";

  std::size_t prev_items = 0;
  for (std::size_t budget = 8; budget <= 400; budget += 8) {
    req.budget = budget;
    const auto b = a.assemble(req);
    EXPECT_LE(b.budget_used, budget);
    const auto items = b.recent_turns.size() + b.recent_observations.size() + b.retrieved.size() +
                       b.knowledge_slices.size();
    EXPECT_GE(items, prev_items);
    prev_items = items;
  }
  req.budget = 2;
  try {
    a.assemble(req);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BudgetTooSmall);
  }
}

TEST(Context, QueryRecordStaysOutOfRecentTurns) {
  const auto k = testkit::demo_recipe();
  MemoryStore store;
  store.append(rec(RecordKind::Utterance, 0, "first question"));
  const auto id = store.append(rec(RecordKind::Utterance, 5, "what next"));
  RecencyLexicalScorer scorer;
  ContextAssembler a(store, k, scorer);
  ContextRequest req;
  req.state = DialogueState::StepGuide;
  req.query = "what next";
  req.query_record_id = id;
  const auto b = a.assemble(req);
  for (const auto& r : b.recent_turns) EXPECT_NE(r.record_id, id);
  ASSERT_FALSE(b.focus_steps.empty());
  EXPECT_EQ(b.focus_steps.front().index, 0u);
}
