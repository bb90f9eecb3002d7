// One PASS/FAIL line per acceptance criterion. Mock adapters and the
// simulated clock only. Exit status is the number of failed criteria.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <sstream>
#include <string>

#include "generators.hpp"
#include "mise/common/error.hpp"
#include "mise/harness/runner.hpp"
#include "mise/harness/scenario.hpp"
#include "mise/knowledge/io.hpp"
#include "mise/knowledge/pipeline.hpp"
#include "mise/knowledge/scenes.hpp"
#include "mise/media/segments.hpp"
#include "mise/memory/store.hpp"
#include "mise/orchestrator/transition.hpp"
#include "mise/session/metrics.hpp"
#include "mise/session/trace.hpp"
#include "rig.hpp"

namespace fs = std::filesystem;
using namespace mise;
using mise::testkit::Rig;

namespace {

fs::path g_fixtures = MISE_FIXTURES_DIR;

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Records the first failure; later checks still run.
struct Checker {
  Outcome out;
  std::size_t count = 0;
  void check(bool ok, const std::string& what) {
    ++count;
    if (!ok && out.pass) {
      out.pass = false;
      out.detail = what;
    }
  }
  Outcome done(const std::string& summary) {
    if (out.pass) out.detail = summary;
    return out;
  }
};

double elapsed_s(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome transition_conformance() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto fixture = TransitionTable::parse(knowledge::read_file(g_fixtures / "transition_table.v1.txt"));
  Checker c;
  for (auto s : kAllStates) {
    for (auto e : kAllEvents) {
      const auto want = fixture.lookup(s, e);
      const auto got = transition(s, e);
      c.check(want == got, std::string(code(s)) + "/" + std::string(code(e)) + " differs from the fixture");
    }
  }
  using S = DialogueState;
  using E = EventKind;
  c.check(transition(S::Idle, E::StepQuery) == S::StepGuide, "E2 from S0 must reach S2");
  for (auto e : {E::ProblemQuery, E::MissedStepDetected, E::IncorrectStepDetected})
    c.check(transition(S::Idle, e) == S::ProblemSolving, std::string(code(e)) + " from S0 must reach S3");
  const double secs = elapsed_s(t0);
  c.check(secs < 1.0, "runtime " + std::to_string(secs) + " s");
  return c.done(std::to_string(c.count - 5) + " cells match, anchored cells hold, " + std::to_string(secs) + " s");
}

// Puts the session into `target` with utterances at the current time.
void enter(session::Session& s, DialogueState target) {
  static const std::map<DialogueState, std::vector<std::string>> kPath = {
      {DialogueState::FoodState, {"Is it cooked?"}},
      {DialogueState::StepGuide, {"What's the next step?"}},
      {DialogueState::ProblemSolving, {"I have a problem"}},
      {DialogueState::GeneralVisual, {"What do you see?"}},
      {DialogueState::CorrectionReview, {"What do you see?", "That's wrong"}},
      {DialogueState::DetailElaboration, {"What do you see?", "Tell me more"}},
  };
  for (const auto& u : kPath.at(target)) s.ingest_utterance(u);
}

Outcome idle_reset() {
  Checker c;
  for (auto target : kAllStates) {
    if (target == DialogueState::Idle) continue;
    for (const int quiet_ms : {4900, 5000}) {
      Rig rig;
      auto& s = rig.s();
      s.advance_to(SessionTime{1000});
      enter(s, target);
      const bool entered = s.state() == target;
      s.advance_to(SessionTime{1000 + quiet_ms});
      const auto want = quiet_ms == 5000 ? DialogueState::Idle : target;
      c.check(entered && s.state() == want, std::string(code(target)) + " after " + std::to_string(quiet_ms) +
                                                " ms is " + std::string(code(s.state())));
    }
  }
  return c.done(std::to_string(c.count) + " assertions: 5.0 s resets S1-S6, 4.9 s does not");
}

Outcome monitor_cadence() {
  Checker c;
  {
    Rig rig;
    rig.s().advance_to(SessionTime{60000});
    const auto obs = rig.s().memory().count(memory::RecordKind::Observation);
    c.check(obs == 30 && rig.s().ticks() == 30, "60 s session produced " + std::to_string(obs) + " observations");
  }
  for (std::uint64_t k = 1; k <= 30; ++k) {
    Rig rig;
    auto& s = rig.s();
    const SessionTime tick_k{2000 * static_cast<std::int64_t>(k)};
    s.advance_to(tick_k - SessionTime{500});
    // Step 3 observed while step 0 is current: steps 1 and 2 were missed.
    rig.scene("chopping the onions", 3);
    s.advance_to(tick_k);
    bool alert = false;
    bool visited = false;
    for (const auto& r : s.trace()) {
      if (r.stimulus != session::StimulusKind::Alert) continue;
      alert = alert || (r.at == tick_k && r.tick_id == k && r.classified_event &&
                        is_alert(*r.classified_event));
      visited = visited || (r.at == tick_k && r.to_state == DialogueState::ProblemSolving);
    }
    c.check(alert && visited, "deviation at tick " + std::to_string(k) + " not handled within its cycle");
  }
  return c.done("30 observations in 60 s; deviations at ticks 1-30 reach S3 at the same tick");
}

Outcome metrics_reproduction() {
  const auto t0 = std::chrono::steady_clock::now();
  struct Row {
    const char* name;
    std::size_t total, mapped, responded;
    double mapping, response;
  };
  // Per-participant counts and accuracies as published.
  const Row rows[] = {
      {"P1", 10, 9, 8, 0.90, 0.80},  {"P2", 6, 5, 5, 0.83, 0.83},   {"P3", 13, 11, 9, 0.85, 0.69},
      {"P4", 7, 5, 4, 0.71, 0.57},   {"P5", 16, 12, 10, 0.75, 0.63}, {"P6", 11, 9, 8, 0.82, 0.73},
      {"P7", 8, 7, 5, 0.88, 0.63},   {"P8", 12, 10, 7, 0.83, 0.58},
  };
  constexpr double kTol = 0.005 + 1e-9;
  Checker c;
  std::vector<session::MetricsReport> reports;
  for (const auto& row : rows) {
    const auto trace = session::read_trace(g_fixtures / "traces" / (std::string(row.name) + ".jsonl"));
    const auto m = session::compute_metrics(trace);
    reports.push_back(m);
    c.check(m.total_queries == row.total && m.correct_mappings == row.mapped && m.correct_responses == row.responded,
            std::string(row.name) + " counts differ");
    c.check(m.mapping_accuracy && std::abs(*m.mapping_accuracy - row.mapping) <= kTol,
            std::string(row.name) + " mapping accuracy");
    c.check(m.response_accuracy && std::abs(*m.response_accuracy - row.response) <= kTol,
            std::string(row.name) + " response accuracy");
  }
  const auto agg = session::aggregate(reports);
  c.check(agg.mapping_accuracy && std::abs(*agg.mapping_accuracy - 0.82) <= kTol,
          "aggregate mapping accuracy " + std::to_string(agg.mapping_accuracy.value_or(-1)));
  c.check(agg.response_accuracy && std::abs(*agg.response_accuracy - 0.67) <= kTol,
          "aggregate response accuracy " + std::to_string(agg.response_accuracy.value_or(-1)));
  const double secs = elapsed_s(t0);
  c.check(secs < 1.0, "runtime " + std::to_string(secs) + " s");
  char buf[128];
  std::snprintf(buf, sizeof buf, "8 participants within 0.005; aggregate %.4f / %.4f", *agg.mapping_accuracy,
                *agg.response_accuracy);
  return c.done(buf);
}

std::string distill_three_unit() {
  const auto dir = g_fixtures / "pipeline" / "three_unit";
  knowledge::DistillInputs in;
  in.transcript = knowledge::read_transcript(dir / "transcript.jsonl");
  in.frames = knowledge::read_frame_manifest(dir / "frames.jsonl");
  in.audio = knowledge::read_wav(dir / "audio.wav");
  in.recipe_id = "three_unit";
  in.title = "Three Unit Toast";
  in.outline_override = knowledge::parse_outline_override(knowledge::read_file(dir / "outline.json"));
  knowledge::EchoVisualDescriber visual;
  knowledge::RmsAudioDescriber audio;
  knowledge::SentenceOutliner outliner;
  return knowledge::to_canonical_json(knowledge::distill(in, {}, {visual, audio, outliner}).knowledge);
}

Outcome pipeline_determinism() {
  Checker c;
  const auto golden = knowledge::read_file(g_fixtures / "pipeline" / "three_unit" / "golden.json");
  const auto first = distill_three_unit();
  const auto second = distill_three_unit();
  c.check(first == second, "two runs differ");
  c.check(first == golden, "output differs from golden.json");
  const auto parsed = knowledge::parse_knowledge(first);
  c.check(parsed.sentences.size() == 3, "three-unit fixture compiled to " + std::to_string(parsed.sentences.size()) +
                                            " sentences");
  const auto recompiled = knowledge::compile_knowledge(parsed.sentences, parsed.ingredients, parsed.steps,
                                                       {parsed.recipe_id, parsed.title, parsed.video_duration});
  c.check(knowledge::to_canonical_json(recompiled) == first, "compile -> parse -> compile changed bytes");

  testkit::Rng rng(20240501);
  constexpr int kInstances = 500;
  for (int i = 0; i < kInstances; ++i) {
    const auto k = testkit::random_knowledge(rng);
    const auto text = knowledge::to_canonical_json(k);
    const auto back = knowledge::parse_knowledge(text);
    c.check(back == k, "instance " + std::to_string(i) + " does not round-trip");
    c.check(knowledge::to_canonical_json(back) == text, "instance " + std::to_string(i) + " bytes change");
  }
  return c.done("golden byte-identical across runs and recompile; " + std::to_string(kInstances) +
                " random instances round-trip");
}

Outcome scene_cut_oracle() {
  Checker c;
  testkit::Rng rng(7);
  std::size_t injected = 0;
  for (int i = 0; i < 20; ++i) {
    const auto frames = 40 + static_cast<std::size_t>(rng() % 80);
    const auto cuts = 1 + static_cast<std::size_t>(rng() % 8);
    const auto stream = testkit::synthetic_stream(rng, frames, cuts);
    const auto got = knowledge::detect_scenes(stream.frames);
    c.check(got.cuts == stream.injected_cuts, "stream " + std::to_string(i) + ": detected " +
                                                  std::to_string(got.cuts.size()) + " cuts, injected " +
                                                  std::to_string(stream.injected_cuts.size()));
    injected += stream.injected_cuts.size();
  }
  return c.done("20 streams, " + std::to_string(injected) + " injected cuts, precision = recall = 1.0");
}

Outcome retrieval_soundness() {
  Checker c;
  testkit::Rng rng(11);
  std::size_t queries = 0;
  for (int store_i = 0; store_i < 60; ++store_i) {
    const auto n = static_cast<std::size_t>(rng() % 201);
    const double decay = store_i % 3 == 0 ? 0.0 : 0.01 * static_cast<double>(store_i % 5);
    memory::MemoryStore store;
    auto records = testkit::random_records(rng, n);
    for (auto& r : records) r.record_id = store.append(r);
    memory::RecencyLexicalScorer scorer(decay);
    for (int q = 0; q < 10; ++q, ++queries) {
      const auto query = testkit::random_query(rng);
      const auto k = static_cast<std::size_t>(rng() % 25);
      const auto want = testkit::brute_force_top_k(records, query, k, decay);
      std::vector<std::uint64_t> got;
      for (const auto& r : memory::retrieve(store, query, k, scorer)) got.push_back(r.record_id);
      c.check(got == want, "store " + std::to_string(store_i) + " query '" + query + "' k=" + std::to_string(k));
    }
  }
  return c.done(std::to_string(queries) + " queries over 60 stores of <= 200 records match brute force");
}

Outcome end_to_end_scenarios() {
  Checker c;
  std::size_t expectations = 0;
  for (const char* file : {"01_missed_salt.json", "02_skipped_step.json", "03_garlic_memory.json"}) {
    const auto script = harness::load_scenario(g_fixtures / "scenarios" / file);
    const auto a = harness::run_scenario(script);
    const auto b = harness::run_scenario(script);
    for (const auto& r : a.results) {
      ++expectations;
      c.check(r.passed, script.name + ": " + r.expectation.describe());
    }
    std::ostringstream ta, tb;
    session::write_trace(a.trace, ta);
    session::write_trace(b.trace, tb);
    c.check(!a.trace.empty() && ta.str() == tb.str(), script.name + ": traces differ between runs");
  }
  return c.done("3 scripts, " + std::to_string(expectations) + " expectations pass; reruns give identical traces");
}

Outcome evidence_consistency() {
  Checker c;
  static const std::vector<std::string> kQueries = {
      "What's the next step?",        "How much salt do I add?",   "Is the pasta cooked?",
      "What do you see?",             "I have a problem with the sauce", "Tell me more about the garlic",
      "That's wrong, I meant the onions", "How long do I simmer the sauce?", "Is the water boiling?",
      "Where is the olive oil?"};
  testkit::Rng rng(3);
  std::size_t responses = 0;
  std::size_t segments = 0;
  std::int64_t t = 0;
  Rig rig;
  auto& s = rig.s();
  while (responses < 100) {
    t += 700;
    s.advance_to(SessionTime{t});
    if (rng() % 4 == 0) rig.scene("stirring the sauce", rng() % s.knowledge().steps.size());
    const auto result = s.ingest_utterance(kQueries[rng() % kQueries.size()]);
    if (!result.response) continue;
    ++responses;
    const auto& env = *result.response;
    c.check(s.evidence().locate(env.response_id) == env.evidence_segments,
            "response " + std::to_string(env.response_id) + ": registry differs from envelope");
    for (const auto& seg : env.evidence_segments) {
      ++segments;
      const auto& unit = s.knowledge().sentences.at(seg.sentence_index);
      c.check(seg.t_start == unit.t_start && seg.t_end == unit.t_end,
              "response " + std::to_string(env.response_id) + ": segment does not snap to its sentence");
    }
  }
  return c.done("100 responses, " + std::to_string(segments) + " evidence segments snap to sentence intervals");
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) g_fixtures = argv[1];
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"transition-conformance", transition_conformance},
      {"idle-reset", idle_reset},
      {"monitor-cadence", monitor_cadence},
      {"metrics-reproduction", metrics_reproduction},
      {"pipeline-determinism", pipeline_determinism},
      {"scene-cut-oracle", scene_cut_oracle},
      {"retrieval-soundness", retrieval_soundness},
      {"end-to-end-scenarios", end_to_end_scenarios},
      {"evidence-consistency", evidence_consistency},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed, std::size(criteria));
  return failed;
}
