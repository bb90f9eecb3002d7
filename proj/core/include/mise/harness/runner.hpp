#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mise/harness/scenario.hpp"
#include "mise/orchestrator/transition.hpp"
#include "mise/session/metrics.hpp"
#include "mise/session/session.hpp"
#include "mise/session/trace.hpp"

namespace mise::harness {

struct ExpectationResult {
  Expectation expectation;
  bool passed = false;
  std::string detail;
  // Trace records closest in time to the expectation's deadline.
  std::vector<session::TraceRecord> nearest;
};

using Cell = std::pair<DialogueState, EventKind>;

struct ScenarioReport {
  std::string name;
  std::vector<session::TraceRecord> trace;
  std::vector<session::OutMessage> messages;
  std::vector<ExpectationResult> results;
  // Accepted (state, event) dispatches observed in the trace.
  std::set<Cell> cells;

  bool passed() const;
};

// Runs the script on a simulated clock with deterministic mocks: keyword
// classifier, grounded generator, scripted perceiver, rule-based judge and
// recording TTS. Stimuli at time t go first, then ticks and idle checks due
// at t.
ScenarioReport run_scenario(const ScenarioScript& script);

std::set<Cell> covered_cells(const std::vector<session::TraceRecord>& trace);

struct CoverageReport {
  std::size_t accepted_cells = 0;
  std::set<Cell> covered;
  std::vector<Cell> missing;

  bool complete() const { return missing.empty(); }
};

CoverageReport coverage(const std::vector<ScenarioReport>& reports,
                        const TransitionTable& table = TransitionTable::standard());

struct SuiteResult {
  std::vector<ScenarioReport> reports;
  CoverageReport coverage;

  bool passed() const;
};

// Every *.json file in `dir`, in file-name order.
SuiteResult run_directory(const std::filesystem::path& dir,
                          const TransitionTable& table = TransitionTable::standard());

std::string junit_xml(const SuiteResult& suite);
std::string format_report(const ScenarioReport& report);

// Applies annotations to a copy of the trace and computes its metrics.
session::MetricsReport score_trace(std::vector<session::TraceRecord> trace,
                                   const std::vector<session::Annotation>& annotations);

}  // namespace mise::harness
