#include <gtest/gtest.h>

#include <filesystem>

#include "generators.hpp"
#include "mise/common/error.hpp"
#include "mise/knowledge/audio.hpp"
#include "mise/knowledge/describers.hpp"
#include "mise/knowledge/io.hpp"
#include "mise/knowledge/pipeline.hpp"
#include "mise/knowledge/scenes.hpp"
#include "mise/knowledge/transcript.hpp"

using namespace mise;
using namespace mise::knowledge;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = MISE_FIXTURES_DIR;

TimedTranscript words(std::initializer_list<Word> w) {
  TimedTranscript t;
  t.words = w;
  return t;
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no Error thrown";
  return ErrorCode::IoError;
}

}  // namespace

TEST(Segmentation, PunctuationClosesSentences) {
  const auto units = segment_transcript(words({{"Boil", 0.0, 0.4},
                                               {"water.", 0.5, 1.0},
                                               {"Add", 1.2, 1.4},
                                               {"salt!", 1.5, 1.9},
                                               {"Done?\"", 2.0, 2.3}}));
  ASSERT_EQ(units.size(), 3u);
  EXPECT_EQ(units[0].text, "Boil water.");
  EXPECT_DOUBLE_EQ(units[0].t_start, 0.0);
  EXPECT_DOUBLE_EQ(units[0].t_end, 1.0);
  EXPECT_EQ(units[1].text, "Add salt!");
  EXPECT_EQ(units[2].index, 2u);
}

TEST(Segmentation, GapBoundaryEnumeration) {
  // gap >= gap_seconds splits; below it does not.
  const std::pair<double, std::size_t> cases[] = {{1.25, 1}, {1.4375, 1}, {1.5, 2}, {1.5625, 2}, {3.0, 2}};
  for (const auto& [gap, expected] : cases) {
    const auto units = segment_transcript(words({{"stir", 0.0, 1.0}, {"slowly", 1.0 + gap, 2.0 + gap}}));
    EXPECT_EQ(units.size(), expected) << "gap " << gap;
  }
}

TEST(Segmentation, MatchesBoundaryCountOracle) {
  testkit::Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    TimedTranscript t;
    double time = 0.0;
    std::size_t boundaries = 0;
    const auto n = 1 + rng() % 30;
    for (std::size_t i = 0; i < n; ++i) {
      const bool stop = rng() % 5 == 0;
      const double len = 0.125 * static_cast<double>(1 + rng() % 4);
      t.words.push_back({stop ? "word." : "word", time, time + len});
      time += len;
      const double gap = 0.25 * static_cast<double>(rng() % 8);
      if (i + 1 == n || stop || gap >= 1.5) ++boundaries;
      time += gap;
    }
    EXPECT_EQ(segment_transcript(t).size(), boundaries);
  }
}

TEST(Segmentation, Errors) {
  EXPECT_EQ(code_of([] { segment_transcript({}); }), ErrorCode::EmptyInput);
  EXPECT_EQ(code_of([] { segment_transcript(words({{"  ", 0, 1}})); }), ErrorCode::EmptyInput);
  EXPECT_EQ(code_of([] { segment_transcript(words({{"a", 1.0, 2.0}, {"b", 0.5, 2.5}})); }),
            ErrorCode::MalformedTranscript);
  EXPECT_EQ(code_of([] { segment_transcript(words({{"a", 2.0, 1.0}})); }), ErrorCode::MalformedTranscript);
  EXPECT_EQ(code_of([] { segment_transcript(words({{"a.", 1.0, 1.0}})); }), ErrorCode::MalformedTranscript);
}

TEST(Scenes, ThresholdIsStrict) {
  std::vector<FrameRecord> frames = {{0.0, {0.0, 0.0}, ""}, {1.0, {0.25, 0.25}, ""}, {2.0, {0.5, 0.5}, ""}};
  EXPECT_TRUE(detect_scenes(frames, 0.25).cuts.empty());
  EXPECT_EQ(detect_scenes(frames, 0.125).cuts, (std::vector<double>{1.0, 2.0}));
  EXPECT_DOUBLE_EQ(content_difference({0, 1}, {1, 1}), 0.5);
}

TEST(Scenes, SyntheticStreamsRecoverInjectedCuts) {
  testkit::Rng rng(99);
  for (int i = 0; i < 20; ++i) {
    const auto s = testkit::synthetic_stream(rng, 60, 1 + rng() % 6);
    EXPECT_EQ(detect_scenes(s.frames).cuts, s.injected_cuts) << "stream " << i;
  }
}

TEST(Scenes, InputErrors) {
  EXPECT_EQ(code_of([] { detect_scenes(std::vector<FrameRecord>{{0.0, {1.0}, ""}}); }), ErrorCode::EmptyInput);
  EXPECT_EQ(code_of([] { detect_scenes(std::vector<FrameRecord>{{1.0, {1.0}, ""}, {1.0, {1.0}, ""}}); }),
            ErrorCode::InvalidInput);
  EXPECT_EQ(code_of([] { detect_scenes(std::vector<FrameRecord>{{0.0, {1.0}, ""}, {1.0, {1.0, 2.0}, ""}}); }),
            ErrorCode::InvalidInput);
  EXPECT_EQ(code_of([] { detect_scenes(std::vector<FrameRecord>{{0.0, {1.0}, ""}, {1.0, {1.0}, ""}}, 0.0); }),
            ErrorCode::InvalidInput);
}

TEST(Keyframes, OnePerOverlappingSceneNearestMidpoint) {
  std::vector<FrameRecord> frames;
  for (int i = 0; i <= 10; ++i) frames.push_back({static_cast<double>(i), {static_cast<double>(i < 5 ? 0 : 1)}, ""});
  SceneCutList cuts{{5.0}, 0.2};
  std::vector<SentenceUnit> sentences(2);
  sentences[0] = {0, "first", 0.0, 4.0, {}, "", ""};
  sentences[1] = {1, "second", 3.0, 8.0, {}, "", ""};
  const auto out = assign_keyframes(sentences, cuts, frames);
  ASSERT_EQ(out.sentences[0].keyframes.size(), 1u);
  EXPECT_DOUBLE_EQ(out.sentences[0].keyframes[0].timestamp, 2.0);
  // [3, 5) -> midpoint 4; [5, 8] -> midpoint 6.5, tie 6 vs 7 picks 6.
  ASSERT_EQ(out.sentences[1].keyframes.size(), 2u);
  EXPECT_DOUBLE_EQ(out.sentences[1].keyframes[0].timestamp, 4.0);
  EXPECT_DOUBLE_EQ(out.sentences[1].keyframes[1].timestamp, 6.0);
  EXPECT_TRUE(out.warnings.empty());
}

TEST(Keyframes, SentenceWithoutFramesWarns) {
  std::vector<FrameRecord> frames = {{0.0, {0}, ""}, {10.0, {0}, ""}};
  std::vector<SentenceUnit> sentences = {{0, "gap", 2.0, 3.0, {}, "", ""}};
  const auto out = assign_keyframes(sentences, {{}, 0.2}, frames);
  EXPECT_TRUE(out.sentences[0].keyframes.empty());
  ASSERT_EQ(out.warnings.size(), 1u);
  EXPECT_EQ(out.warnings[0].code, "no_frames");
  EXPECT_EQ(out.warnings[0].sentence, 0u);
}

TEST(Describers, VisualNeedsKeyframes) {
  EchoVisualDescriber echo;
  SentenceUnit u{0, "Chop.", 0, 1, {}, "", ""};
  EXPECT_EQ(code_of([&] { describe_visual(u, echo); }), ErrorCode::EmptyInput);
  u.keyframes.push_back({0.5, "h"});
  EXPECT_EQ(describe_visual(u, echo), "KF:1 TXT:Chop.");
  FailingVisualDescriber failing;
  EXPECT_EQ(code_of([&] { describe_visual(u, failing); }), ErrorCode::DescriberUnavailable);
}

TEST(Describers, RmsLabels) {
  RmsAudioDescriber d;
  std::vector<float> quiet(100, 0.001f), mid(100, 0.05f), loud(100, 0.5f);
  EXPECT_EQ(d.describe({quiet, 16000, 0, 1}), "silence");
  EXPECT_EQ(d.describe({mid, 16000, 0, 1}), "ambient kitchen noise");
  EXPECT_EQ(d.describe({loud, 16000, 0, 1}), "sizzling");
}

TEST(Audio, WavRoundTrip) {
  AudioTrack t;
  t.sample_rate = 8000;
  for (int i = 0; i < 800; ++i) t.samples.push_back(static_cast<float>((i % 200) - 100) / 128.0f);
  const auto back = parse_wav(encode_wav_pcm16(t));
  EXPECT_EQ(back.sample_rate, 8000);
  ASSERT_EQ(back.samples.size(), t.samples.size());
  for (std::size_t i = 0; i < t.samples.size(); ++i) EXPECT_NEAR(back.samples[i], t.samples[i], 1.0 / 32767);
  EXPECT_DOUBLE_EQ(back.duration(), 0.1);
  EXPECT_EQ(back.window(0.05, 0.1).size(), 400u);
  EXPECT_EQ(code_of([] { parse_wav("RIFF"); }), ErrorCode::ParseError);
}

TEST(KnowledgeIo, RandomInstancesRoundTrip) {
  testkit::Rng rng(1);
  for (int i = 0; i < 500; ++i) {
    const auto k = testkit::random_knowledge(rng);
    ASSERT_NO_THROW(validate(k));
    const auto text = to_canonical_json(k);
    const auto back = parse_knowledge(text);
    ASSERT_EQ(back, k) << text;
    ASSERT_EQ(to_canonical_json(back), text);
  }
}

TEST(KnowledgeIo, CanonicalFormIsSortedWithTrailingNewline) {
  const auto text = to_canonical_json(testkit::demo_recipe());
  EXPECT_EQ(text.back(), '\n');
  EXPECT_LT(text.find("\"ingredients\""), text.find("\"recipe_id\""));
  EXPECT_LT(text.find("\"recipe_id\""), text.find("\"steps\""));
}

TEST(KnowledgeIo, SchemaViolations) {
  auto base = testkit::demo_recipe();
  auto bad = [&](auto mutate) {
    auto k = base;
    mutate(k);
    return code_of([&] { parse_knowledge(to_json(k).dump()); });
  };
  EXPECT_EQ(bad([](RecipeKnowledge& k) { k.schema_version = 2; }), ErrorCode::SchemaViolation);
  EXPECT_EQ(bad([](RecipeKnowledge& k) { k.sentences.clear(); }), ErrorCode::SchemaViolation);
  EXPECT_EQ(bad([](RecipeKnowledge& k) { k.sentences[1].t_start = 1.0; }), ErrorCode::SchemaViolation);
  EXPECT_EQ(bad([](RecipeKnowledge& k) { k.steps[2].last_sentence = 40; }), ErrorCode::SchemaViolation);
  EXPECT_EQ(bad([](RecipeKnowledge& k) { k.steps[2].first_sentence = 1; }), ErrorCode::SchemaViolation);
  EXPECT_EQ(bad([](RecipeKnowledge& k) { k.ingredients[0].first_mention = 99; }), ErrorCode::SchemaViolation);
  EXPECT_EQ(bad([](RecipeKnowledge& k) { k.sentences[0].keyframes[0].timestamp = 30.0; }),
            ErrorCode::SchemaViolation);
  EXPECT_EQ(code_of([] { parse_knowledge("{not json"); }), ErrorCode::SchemaViolation);
  EXPECT_EQ(code_of([] { parse_knowledge("{}"); }), ErrorCode::SchemaViolation);
}

TEST(KnowledgeIo, TranscriptAndFrameManifest) {
  const auto t = parse_transcript("{\"language\":\"it\"}\n{\"w\":\"Ciao\",\"s\":0.5,\"e\":0.9}\n");
  EXPECT_EQ(t.language, "it");
  ASSERT_EQ(t.words.size(), 1u);
  EXPECT_EQ(t.words[0], (Word{"Ciao", 0.5, 0.9}));

  FrameRecord f{1.5, {0.25, 0.5}, "f/0015.jpg"};
  const auto frames = parse_frame_manifest("# header\n\n" + frame_manifest_line(f) + "\n");
  ASSERT_EQ(frames.size(), 1u);
  EXPECT_EQ(frames[0], f);
  EXPECT_EQ(code_of([] { parse_frame_manifest("{\"t\": \"x\"}"); }), ErrorCode::ParseError);
}

TEST(KnowledgeIo, OutlineFormats) {
  const auto o = parse_outline("step 0-1 boil the water\ningredient 0 water | 2 l\nstep 2-2 add salt\n");
  ASSERT_EQ(o.steps.size(), 2u);
  EXPECT_EQ(o.steps[1].index, 1u);
  EXPECT_EQ(o.steps[0].last_sentence, 1u);
  EXPECT_EQ(o.steps[1].summary, "add salt");
  ASSERT_EQ(o.ingredients.size(), 1u);
  EXPECT_EQ(o.ingredients[0].quantity, "2 l");

  const auto j = parse_outline_override(
      R"({"ingredients":[{"name":"salt","quantity":"1 tsp","first_mention":1}],
          "steps":[{"summary":"salt it","first_sentence":1,"last_sentence":1}]})");
  EXPECT_EQ(j.steps.at(0).summary, "salt it");
  EXPECT_EQ(j.ingredients.at(0).first_mention, 1u);
}

TEST(Pipeline, ThreeUnitGoldenIsReproduced) {
  const auto dir = kFixtures / "pipeline" / "three_unit";
  DistillInputs in;
  in.transcript = read_transcript(dir / "transcript.jsonl");
  in.frames = read_frame_manifest(dir / "frames.jsonl");
  in.audio = read_wav(dir / "audio.wav");
  in.recipe_id = "three_unit";
  in.title = "Three Unit Toast";
  in.outline_override = parse_outline_override(read_file(dir / "outline.json"));
  EchoVisualDescriber visual;
  RmsAudioDescriber audio;
  SentenceOutliner outliner;
  const auto a = distill(in, {}, {visual, audio, outliner});
  const auto b = distill(in, {}, {visual, audio, outliner});
  EXPECT_EQ(to_canonical_json(a.knowledge), to_canonical_json(b.knowledge));
  EXPECT_EQ(to_canonical_json(a.knowledge), read_file(dir / "golden.json"));

  // Structure checked independently of the golden bytes.
  const auto& k = a.knowledge;
  ASSERT_EQ(k.sentences.size(), 3u);
  for (const auto& s : k.sentences) {
    EXPECT_FALSE(s.keyframes.empty());
    EXPECT_EQ(s.visual_description.rfind("KF:", 0), 0u);
    EXPECT_FALSE(s.audio_description.empty());
  }
  EXPECT_TRUE(a.warnings.empty());
}

TEST(Pipeline, DescriberFailuresBecomeWarnings) {
  const auto dir = kFixtures / "pipeline" / "three_unit";
  DistillInputs in;
  in.transcript = read_transcript(dir / "transcript.jsonl");
  in.frames = read_frame_manifest(dir / "frames.jsonl");
  in.recipe_id = "x";
  FailingVisualDescriber visual;
  FailingAudioDescriber audio;
  SentenceOutliner outliner;
  const auto r = distill(in, {}, {visual, audio, outliner});
  std::size_t visual_warnings = 0;
  for (const auto& w : r.warnings) visual_warnings += w.code == "visual_describer_failed";
  EXPECT_EQ(visual_warnings, r.knowledge.sentences.size());
  for (const auto& s : r.knowledge.sentences) EXPECT_TRUE(s.visual_description.empty());
  // One step per sentence from the sentence outliner.
  EXPECT_EQ(r.knowledge.steps.size(), r.knowledge.sentences.size());
}

TEST(Pipeline, CompileRenumbersAndRejectsDanglingIndices) {
  auto k = testkit::demo_recipe();
  for (auto& s : k.sentences) s.index += 10;
  for (auto& s : k.steps) s.index += 3;
  const auto c = compile_knowledge(k.sentences, k.ingredients, k.steps, {"demo", "Demo", k.video_duration});
  EXPECT_EQ(c.sentences[4].index, 4u);
  EXPECT_EQ(c.steps[6].index, 6u);
  auto steps = k.steps;
  steps.back().last_sentence = 99;
  EXPECT_EQ(code_of([&] { compile_knowledge(k.sentences, k.ingredients, steps, {"d", "D", k.video_duration}); }),
            ErrorCode::SchemaViolation);
}
