#include <gtest/gtest.h>

#include "generators.hpp"
#include "mise/common/error.hpp"
#include "mise/monitor/monitor.hpp"

using namespace mise;
using namespace mise::monitor;

namespace {

Judgment judged(std::size_t matched, bool correct, std::optional<std::size_t> advanced = std::nullopt) {
  Judgment j;
  j.relevant = true;
  j.correct = correct;
  j.matched_step = matched;
  j.advanced_to = advanced;
  return j;
}

}  // namespace

TEST(Observation, ReplyRoundTrip) {
  Observation obs;
  obs.action = "stirring the pot";
  obs.matched_step = 2;
  obs.visible_items = {"pot", "wooden spoon"};
  obs.sounds = {"bubbling"};
  const auto back = parse_observation_reply(format_observation_reply(obs));
  EXPECT_EQ(back.action, obs.action);
  EXPECT_EQ(back.matched_step, 2u);
  EXPECT_EQ(back.visible_items, obs.visible_items);
  EXPECT_EQ(back.sounds, obs.sounds);
}

TEST(Observation, ReplyParsingIsLenient) {
  const auto o = parse_observation_reply("Sounds: sizzling\nACTION: frying\nstep: none\nmood: great\n");
  EXPECT_EQ(o.action, "frying");
  EXPECT_FALSE(o.matched_step);
  EXPECT_EQ(o.sounds, std::vector<std::string>{"sizzling"});
  EXPECT_THROW(parse_observation_reply("step: 1"), Error);
  EXPECT_THROW(parse_observation_reply("action: x\nstep: two"), Error);
}

TEST(Tick, PerceiverFailureDegrades) {
  ScriptedPerceiver p;
  p.fail_on_tick(2);
  const auto ok = tick(1, SessionTime{2000}, SessionTime{0}, {}, p);
  EXPECT_FALSE(ok.degraded);
  EXPECT_EQ(ok.action, "idle");
  const auto bad = tick(2, SessionTime{4000}, SessionTime{2000}, {}, p);
  EXPECT_TRUE(bad.degraded);
  EXPECT_EQ(bad.tick_id, 2u);
  EXPECT_EQ(bad.timestamp, SessionTime{4000});
  EXPECT_TRUE(bad.action.empty());
  p.set_scene("no action line");
  EXPECT_TRUE(tick(3, SessionTime{6000}, SessionTime{4000}, {}, p).degraded);
  EXPECT_EQ(p.calls(), 3u);
}

TEST(Judge, RuleBasedVerdicts) {
  const auto k = testkit::demo_recipe();
  RuleBasedJudge adapter;
  ProgressState progress;

  Observation obs;
  obs.action = "putting spaghetti in the pot";
  obs.matched_step = 2;
  auto j = judge(obs, k, progress, adapter, 5);
  EXPECT_EQ(j.judgment_id, 5u);
  EXPECT_TRUE(j.relevant);
  EXPECT_EQ(j.correct, true);
  EXPECT_EQ(j.missed_steps, std::vector<std::size_t>{1});
  EXPECT_EQ(j.advanced_to, 2u);
  EXPECT_EQ(emit_alerts(j), std::vector<EventKind>{EventKind::MissedStepDetected});

  obs.action = "not boiling the water";
  obs.matched_step = 0;
  j = judge(obs, k, progress, adapter, 6);
  EXPECT_EQ(j.correct, false);
  EXPECT_TRUE(j.missed_steps.empty());
  EXPECT_EQ(emit_alerts(j), std::vector<EventKind>{EventKind::IncorrectStepDetected});

  obs.matched_step.reset();
  j = judge(obs, k, progress, adapter, 7);
  EXPECT_FALSE(j.relevant);
  EXPECT_FALSE(j.correct);
  EXPECT_TRUE(emit_alerts(j).empty());

  obs.matched_step = 99;
  EXPECT_FALSE(judge(obs, k, progress, adapter, 8).relevant);
}

TEST(Judge, FailuresAndDegradedObservationsEmitNothing) {
  const auto k = testkit::demo_recipe();
  Observation obs;
  obs.action = "chop onions";
  obs.matched_step = 3;
  FailingJudge failing;
  auto j = judge(obs, k, {}, failing, 1);
  EXPECT_TRUE(j.degraded);
  EXPECT_TRUE(emit_alerts(j).empty());

  RuleBasedJudge adapter;
  obs.degraded = true;
  j = judge(obs, k, {}, adapter, 2);
  EXPECT_TRUE(j.degraded);
  EXPECT_FALSE(j.relevant);
  EXPECT_TRUE(emit_alerts(j).empty());
}

TEST(Judge, MissedStepsMatchBruteForce) {
  testkit::Rng rng(17);
  for (int trial = 0; trial < 500; ++trial) {
    ProgressState p;
    p.current_step = rng() % 10;
    for (std::size_t s = 0; s < 10; ++s) {
      const auto r = rng() % 4;
      if (r == 0) p.completed_steps.insert(s);
      if (r == 1) p.skipped_steps.insert(s);
    }
    const std::size_t matched = rng() % 11;
    std::vector<std::size_t> want;
    for (std::size_t s = 0; s < matched; ++s) {
      if (s != p.current_step && !p.completed_steps.count(s) && !p.skipped_steps.count(s)) want.push_back(s);
    }
    EXPECT_EQ(missed_steps_before(matched, p), want);
  }
}

TEST(Judge, ActionMatching) {
  EXPECT_TRUE(action_matches_step("adding salt", "add salt to the boiling water"));
  EXPECT_FALSE(action_matches_step("forgot the salt", "add salt to the boiling water"));
  EXPECT_FALSE(action_matches_step("washing dishes", "add salt to the boiling water"));
}

TEST(Progress, FoldOverJudgments) {
  ProgressState p;
  const std::size_t steps = 5;
  // Fold a sequence of advances; the oracle tracks the pointer by hand.
  const std::optional<std::size_t> targets[] = {1, std::nullopt, 3, 2, 3, 7, 4};
  std::size_t expected_current = 0;
  std::set<std::size_t> expected_completed;
  for (auto t : targets) {
    Judgment j;
    j.advanced_to = t;
    const auto u = advance_progress(j, p, steps);
    const bool forward = t && *t < steps && *t > expected_current;
    EXPECT_EQ(u.rejected, t.has_value() && !forward);
    if (forward) {
      expected_completed.insert(expected_current);
      expected_current = *t;
    }
    p = u.progress;
    EXPECT_EQ(p.current_step, expected_current);
    EXPECT_EQ(p.completed_steps, expected_completed);
  }
}

TEST(Progress, LateCompletionOfMissedStep) {
  ProgressState p;
  p.current_step = 2;
  p.completed_steps = {0};
  auto u = advance_progress(judged(1, true), p, 5);
  EXPECT_FALSE(u.rejected);
  EXPECT_EQ(u.progress.current_step, 2u);
  EXPECT_EQ(u.progress.completed_steps, (std::set<std::size_t>{0, 1}));
  // An incorrect attempt does not complete it.
  u = advance_progress(judged(1, false), p, 5);
  EXPECT_EQ(u.progress.completed_steps, (std::set<std::size_t>{0}));
}

TEST(AlertLimiter, CooldownBoundary) {
  AlertLimiter lim(SessionTime{30000});
  EXPECT_TRUE(lim.admit(EventKind::MissedStepDetected, 1, SessionTime{2000}));
  EXPECT_FALSE(lim.admit(EventKind::MissedStepDetected, 1, SessionTime{31999}));
  EXPECT_TRUE(lim.admit(EventKind::MissedStepDetected, 2, SessionTime{4000}));
  EXPECT_TRUE(lim.admit(EventKind::IncorrectStepDetected, 1, SessionTime{4000}));
  EXPECT_TRUE(lim.admit(EventKind::MissedStepDetected, 1, SessionTime{32000}));
  AlertLimiter none(SessionTime{0});
  EXPECT_TRUE(none.admit(EventKind::MissedStepDetected, 1, SessionTime{0}));
  EXPECT_TRUE(none.admit(EventKind::MissedStepDetected, 1, SessionTime{0}));
}

TEST(TickSchedule, FiresOnMultiplesOfThePeriod) {
  TickSchedule t(SessionTime{500});
  EXPECT_EQ(t.next_due(), SessionTime{500});
  for (int i = 0; i < 6; ++i) t.fire();
  EXPECT_EQ(t.ticks_done(), 6u);
  EXPECT_EQ(t.last_tick_time(), SessionTime{3000});
  EXPECT_THROW(TickSchedule(SessionTime{0}), Error);
}
