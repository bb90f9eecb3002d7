#include <gtest/gtest.h>

#include "mise/common/error.hpp"
#include "mise/harness/runner.hpp"

using namespace mise;
using namespace mise::harness;
using nlohmann::json;

namespace {

const std::filesystem::path kFixtures = MISE_FIXTURES_DIR;
const std::filesystem::path kScenarios = kFixtures / "scenarios";

json minimal() {
  return json{{"name", "t"},
              {"recipe", "recipes/pasta.json"},
              {"timeline", json::array({{{"at", 1.0}, {"utterance", "What's the next step?"}}})},
              {"expect", json::array({{{"by", 2}, {"event", "E2"}}})}};
}

void expect_script_error(const json& j) {
  try {
    parse_scenario(j, kFixtures);
    FAIL() << j.dump();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ScriptError) << j.dump();
  }
}

}  // namespace

TEST(Harness, ParsesAMinimalScript) {
  const auto s = parse_scenario(minimal(), kFixtures);
  EXPECT_EQ(s.name, "t");
  ASSERT_EQ(s.timeline.size(), 1u);
  EXPECT_EQ(s.timeline[0].at, SessionTime{1000});
  ASSERT_EQ(s.expectations.size(), 1u);
  EXPECT_EQ(s.expectations[0].kind, ExpectKind::Event);
}

TEST(Harness, RejectsMalformedScripts) {
  auto j = minimal();
  j["recipe"] = "recipes/missing.json";
  expect_script_error(j);

  j = minimal();
  j["timeline"].push_back({{"at", 0.5}, {"utterance", "earlier"}});
  expect_script_error(j);

  j = minimal();
  j["expect"].push_back({{"by", 1}, {"event", "E1"}});
  expect_script_error(j);

  j = minimal();
  j["timeline"][0] = {{"at", 1.0}, {"dance", "x"}};
  expect_script_error(j);

  j = minimal();
  j["expect"][0] = {{"by", 2}, {"colour", "red"}};
  expect_script_error(j);

  j = minimal();
  j.erase("recipe");
  expect_script_error(j);
}

TEST(Harness, FixtureSuitePassesWithFullCoverage) {
  const auto suite = run_directory(kScenarios);
  ASSERT_EQ(suite.reports.size(), 4u);
  for (const auto& r : suite.reports) EXPECT_TRUE(r.passed()) << format_report(r);
  EXPECT_EQ(suite.coverage.accepted_cells, 68u);
  EXPECT_TRUE(suite.coverage.complete());
  EXPECT_TRUE(suite.passed());

  const auto xml = junit_xml(suite);
  EXPECT_NE(xml.find("<testsuite"), std::string::npos);
  EXPECT_NE(xml.find("failures=\"0\""), std::string::npos);
  for (const auto& r : suite.reports) EXPECT_NE(xml.find(r.name), std::string::npos);
}

TEST(Harness, RunsAreDeterministic) {
  const auto script = load_scenario(kScenarios / "01_missed_salt.json");
  const auto a = run_scenario(script);
  const auto b = run_scenario(script);
  EXPECT_EQ(a.trace, b.trace);
  ASSERT_EQ(a.messages.size(), b.messages.size());
}

TEST(Harness, FailingExpectationNamesNearbyRecords) {
  auto j = minimal();
  j["expect"] = json::array({{{"by", 2}, {"event", "E6"}}});
  const auto report = run_scenario(parse_scenario(j, kFixtures));
  EXPECT_FALSE(report.passed());
  ASSERT_EQ(report.results.size(), 1u);
  EXPECT_FALSE(report.results[0].passed);
  EXPECT_FALSE(report.results[0].nearest.empty());
  EXPECT_NE(format_report(report).find("E6"), std::string::npos);
}

TEST(Harness, NegatedExpectations) {
  auto j = minimal();
  j["expect"] = json::array({{{"by", 2}, {"event", "E2"}, {"negate", true}}});
  EXPECT_FALSE(run_scenario(parse_scenario(j, kFixtures)).passed());
  j["expect"] = json::array({{{"by", 2}, {"alert", "E5"}, {"negate", true}}});
  EXPECT_TRUE(run_scenario(parse_scenario(j, kFixtures)).passed());
}

TEST(Harness, ScoresAnnotatedTrace) {
  auto j = minimal();
  j["timeline"].push_back({{"at", 2.0}, {"utterance", "Thanks"}});
  const auto report = run_scenario(parse_scenario(j, kFixtures));
  std::vector<session::Annotation> labels;
  for (const auto& r : report.trace)
    if (r.is_query()) labels.push_back({r.seq, *r.classified_event, labels.empty()});
  ASSERT_EQ(labels.size(), 2u);
  const auto m = score_trace(report.trace, labels);
  EXPECT_EQ(m.total_queries, 2u);
  EXPECT_EQ(m.correct_mappings, 2u);
  EXPECT_EQ(m.correct_responses, 1u);
  EXPECT_DOUBLE_EQ(*m.response_accuracy, 0.5);

  labels.pop_back();
  EXPECT_THROW(score_trace(report.trace, labels), Error);
}
