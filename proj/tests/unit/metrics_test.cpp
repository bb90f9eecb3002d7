#include <gtest/gtest.h>

#include <sstream>

#include "mise/common/error.hpp"
#include "mise/session/metrics.hpp"
#include "mise/session/trace.hpp"

using namespace mise;
using namespace mise::session;

namespace {

TraceRecord query(std::uint64_t seq, EventKind classified, std::optional<EventKind> truth, std::optional<bool> ok) {
  TraceRecord r;
  r.seq = seq;
  r.stimulus = StimulusKind::Utterance;
  r.at = SessionTime{static_cast<std::int64_t>(seq) * 1000};
  r.utterance = "q" + std::to_string(seq);
  r.classified_event = classified;
  r.ground_truth_event = truth;
  r.response_correct = ok;
  return r;
}

}  // namespace

TEST(Trace, JsonRoundTripKeepsEveryField) {
  TraceRecord r;
  r.seq = 4;
  r.stimulus = StimulusKind::Alert;
  r.at = SessionTime{4000};
  r.utterance = "x";
  r.record_id = 9;
  r.classified_event = EventKind::MissedStepDetected;
  r.from_state = DialogueState::StepGuide;
  r.to_state = DialogueState::ProblemSolving;
  r.rejected = true;
  r.response_id = 3;
  r.response_text = "Add \"salt\".";
  r.tick_id = 2;
  r.judgment_id = 2;
  r.step = 1;
  r.tts_failed = true;
  r.error = "GenerationUnavailable";
  r.ground_truth_event = EventKind::ProblemQuery;
  r.response_correct = false;
  EXPECT_EQ(trace_from_json(to_json(r)), r);
  std::ostringstream out;
  write_trace({r, query(5, EventKind::StepQuery, std::nullopt, std::nullopt)}, out);
  const auto back = parse_trace(out.str() + "\n\n");
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0], r);
  EXPECT_THROW(parse_trace("{\"seq\":1}\nnot json\n"), Error);
}

TEST(Trace, AnnotateOnlyQueries) {
  std::vector<TraceRecord> t = {query(1, EventKind::StepQuery, std::nullopt, std::nullopt)};
  TraceRecord tick;
  tick.seq = 2;
  tick.stimulus = StimulusKind::Tick;
  t.push_back(tick);
  const auto labels = parse_annotations("{\"seq\":1,\"event\":\"E1\",\"correct\":true}\n");
  annotate(t, labels);
  EXPECT_EQ(t[0].ground_truth_event, EventKind::FoodStateQuery);
  EXPECT_EQ(t[0].response_correct, true);
  try {
    annotate(t, {{2, EventKind::StepQuery, true}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidInput);
  }
  EXPECT_THROW(parse_annotations("{\"seq\":1,\"event\":\"E99\",\"correct\":true}"), Error);
}

TEST(Metrics, HandComputedExample) {
  const std::vector<TraceRecord> t = {
      query(1, EventKind::StepQuery, EventKind::StepQuery, true),
      query(2, EventKind::StepQuery, EventKind::FoodStateQuery, false),
      query(3, EventKind::FollowUpDetails, EventKind::FollowUpDetails, true),
      query(4, EventKind::GeneralVisualQuery, EventKind::GeneralVisualQuery, true),
  };
  const auto m = compute_metrics(t);
  EXPECT_EQ(m.total_queries, 4u);
  EXPECT_EQ(m.mapped_queries, 3u);
  EXPECT_EQ(m.correct_mappings, 2u);
  EXPECT_EQ(m.correct_responses, 3u);
  EXPECT_DOUBLE_EQ(*m.mapping_accuracy, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(*m.response_accuracy, 0.75);
}

TEST(Metrics, EmptyTraceHasNoAccuracies) {
  const auto m = compute_metrics({});
  EXPECT_EQ(m.total_queries, 0u);
  EXPECT_FALSE(m.mapping_accuracy);
  EXPECT_FALSE(m.response_accuracy);
}

TEST(Metrics, MissingLabelsAreListed) {
  const std::vector<TraceRecord> t = {query(1, EventKind::StepQuery, EventKind::StepQuery, true),
                                      query(7, EventKind::StepQuery, std::nullopt, std::nullopt),
                                      query(9, EventKind::StepQuery, EventKind::StepQuery, std::nullopt)};
  try {
    compute_metrics(t);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IncompleteAnnotation);
    EXPECT_NE(std::string(e.what()).find('7'), std::string::npos);
    EXPECT_NE(std::string(e.what()).find('9'), std::string::npos);
  }
}

TEST(Metrics, SynthesizedTracesReproduceTheirCounts) {
  for (std::size_t total = 1; total <= 16; ++total) {
    for (std::size_t follow = 0; follow <= 2 && follow <= total; ++follow) {
      for (std::size_t mapped = 0; mapped + follow <= total; ++mapped) {
        const std::size_t responded = (total * 3) / 4;
        const auto m = compute_metrics(synthesize_annotated_trace(total, mapped, responded, follow));
        EXPECT_EQ(m.total_queries, total);
        EXPECT_EQ(m.mapped_queries, total - follow);
        EXPECT_EQ(m.correct_mappings, mapped);
        EXPECT_EQ(m.correct_responses, responded);
      }
    }
  }
  EXPECT_THROW(synthesize_annotated_trace(3, 4, 0), Error);
  EXPECT_THROW(synthesize_annotated_trace(3, 0, 4), Error);
}

TEST(Metrics, AggregatePoolsCounts) {
  const auto a = compute_metrics(synthesize_annotated_trace(10, 9, 8));
  const auto b = compute_metrics(synthesize_annotated_trace(6, 5, 5));
  const auto agg = aggregate({a, b});
  EXPECT_EQ(agg.total_queries, 16u);
  EXPECT_DOUBLE_EQ(*agg.mapping_accuracy, 14.0 / 16.0);
  EXPECT_DOUBLE_EQ(*agg.response_accuracy, 13.0 / 16.0);
  const auto j = to_json(agg);
  EXPECT_EQ(j["total_queries"], 16);
  EXPECT_NE(format_report(agg).find("16"), std::string::npos);
}
