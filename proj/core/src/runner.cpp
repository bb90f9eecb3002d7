#include "mise/harness/runner.hpp"

#include <algorithm>
#include <cstdio>

#include "mise/common/error.hpp"
#include "mise/common/text.hpp"
#include "mise/knowledge/io.hpp"
#include "mise/monitor/monitor.hpp"
#include "mise/orchestrator/classifier.hpp"

namespace mise::harness {
namespace {

bool in_window(SessionTime t, const Expectation& e) { return t >= e.after && t <= e.by; }

std::optional<std::string> find_match(const Expectation& e, const std::vector<session::TraceRecord>& trace,
                                      const std::vector<session::OutMessage>& messages) {
  switch (e.kind) {
    case ExpectKind::Event:
    case ExpectKind::Alert: {
      const auto want = parse_event(e.value);
      for (const auto& r : trace) {
        if (!in_window(r.at, e) || r.classified_event != want) continue;
        if (e.kind == ExpectKind::Alert && r.stimulus != session::StimulusKind::Alert) continue;
        return "trace seq " + std::to_string(r.seq);
      }
      return std::nullopt;
    }
    case ExpectKind::State: {
      const auto want = parse_state(e.value);
      for (const auto& r : trace) {
        if (in_window(r.at, e) && !r.rejected && r.to_state == want) return "trace seq " + std::to_string(r.seq);
      }
      return std::nullopt;
    }
    case ExpectKind::ResponseContains:
    case ExpectKind::PlaybackStatus: {
      const char* type = e.kind == ExpectKind::ResponseContains ? "response" : "playback";
      for (const auto& m : messages) {
        if (m.at("type") != type || !in_window(SessionTime{m.at("t_ms").get<std::int64_t>()}, e)) continue;
        const bool hit = e.kind == ExpectKind::ResponseContains
                             ? text::contains_ci(m.at("text").get<std::string>(), e.value)
                             : m.at("status").get<std::string>() == e.value;
        if (hit) return "message seq " + std::to_string(m.at("seq").get<std::uint64_t>());
      }
      return std::nullopt;
    }
  }
  return std::nullopt;
}

std::vector<session::TraceRecord> nearest_records(const std::vector<session::TraceRecord>& trace, SessionTime t,
                                                  std::size_t n = 3) {
  std::vector<session::TraceRecord> sorted = trace;
  std::stable_sort(sorted.begin(), sorted.end(), [&](const auto& a, const auto& b) {
    return std::llabs((a.at - t).count()) < std::llabs((b.at - t).count());
  });
  if (sorted.size() > n) sorted.resize(n);
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.seq < b.seq; });
  return sorted;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string cell_name(const Cell& c) { return std::string(code(c.first)) + "/" + std::string(code(c.second)); }

}  // namespace

bool ScenarioReport::passed() const {
  return std::all_of(results.begin(), results.end(), [](const auto& r) { return r.passed; });
}

bool SuiteResult::passed() const {
  return coverage.complete() &&
         std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.passed(); });
}

ScenarioReport run_scenario(const ScenarioScript& script) {
  auto cfg_json = script.config;
  cfg_json["recipe"] = script.recipe.string();
  const auto cfg = session::parse_config(cfg_json);

  KeywordClassifier classifier;
  GroundedGenerator generator;
  monitor::ScriptedPerceiver perceiver;
  monitor::RuleBasedJudge judge;
  session::MockTts tts;

  knowledge::RecipeKnowledge k;
  try {
    k = knowledge::load_knowledge(script.recipe);
  } catch (const Error& e) {
    throw Error(ErrorCode::ScriptError, "scenario " + script.name + ": " + e.what());
  }
  session::Session s(cfg, std::move(k), {classifier, generator, perceiver, judge, tts});

  for (const auto& entry : script.timeline) {
    s.advance_to(entry.at, false);
    switch (entry.kind) {
      case TimelineKind::Utterance:
        s.ingest_utterance(entry.text);
        break;
      case TimelineKind::Scene:
        perceiver.fail_always(entry.perceiver_fails);
        if (!entry.perceiver_fails) perceiver.set_scene(entry.text);
        break;
      case TimelineKind::SkipDeclaration:
        s.declare_skip(entry.step);
        break;
      case TimelineKind::Command: {
        const auto cmd = media::parse_media_command(entry.text);
        if (!cmd) throw Error(ErrorCode::ScriptError, "scenario " + script.name + ": unknown command " + entry.text);
        s.command(*cmd);
        break;
      }
    }
  }
  s.advance_to(script.duration);

  ScenarioReport report;
  report.name = script.name;
  report.trace = s.trace();
  report.messages = s.drain_outbox();
  report.cells = covered_cells(report.trace);
  for (const auto& e : script.expectations) {
    ExpectationResult r;
    r.expectation = e;
    const auto match = find_match(e, report.trace, report.messages);
    r.passed = e.negate ? !match : match.has_value();
    r.detail = match ? "matched " + *match : "no matching record";
    if (!r.passed) r.nearest = nearest_records(report.trace, e.by);
    report.results.push_back(std::move(r));
  }
  return report;
}

std::set<Cell> covered_cells(const std::vector<session::TraceRecord>& trace) {
  std::set<Cell> out;
  for (const auto& r : trace) {
    if (r.classified_event && !r.rejected && !r.error) out.emplace(r.from_state, *r.classified_event);
  }
  return out;
}

CoverageReport coverage(const std::vector<ScenarioReport>& reports, const TransitionTable& table) {
  CoverageReport c;
  for (const auto& r : reports) c.covered.insert(r.cells.begin(), r.cells.end());
  for (auto s : kAllStates) {
    for (auto e : kAllEvents) {
      if (!table.lookup(s, e)) continue;
      ++c.accepted_cells;
      if (!c.covered.contains({s, e})) c.missing.emplace_back(s, e);
    }
  }
  return c;
}

SuiteResult run_directory(const std::filesystem::path& dir, const TransitionTable& table) {
  if (!std::filesystem::is_directory(dir)) throw Error(ErrorCode::ScriptError, "not a directory: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<ScenarioScript> scripts;
  for (const auto& f : files) scripts.push_back(load_scenario(f));

  SuiteResult suite;
  for (const auto& s : scripts) suite.reports.push_back(run_scenario(s));
  suite.coverage = coverage(suite.reports, table);
  return suite;
}

std::string junit_xml(const SuiteResult& suite) {
  std::size_t tests = 1;
  std::size_t failures = suite.coverage.complete() ? 0 : 1;
  for (const auto& r : suite.reports) {
    tests += r.results.size();
    for (const auto& x : r.results) failures += x.passed ? 0 : 1;
  }
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<testsuites name=\"mise-harness\" tests=\"" + std::to_string(tests) + "\" failures=\"" +
         std::to_string(failures) + "\">\n";
  for (const auto& r : suite.reports) {
    std::size_t f = 0;
    for (const auto& x : r.results) f += x.passed ? 0 : 1;
    out += "  <testsuite name=\"" + xml_escape(r.name) + "\" tests=\"" + std::to_string(r.results.size()) +
           "\" failures=\"" + std::to_string(f) + "\">\n";
    for (const auto& x : r.results) {
      out += "    <testcase classname=\"" + xml_escape(r.name) + "\" name=\"" + xml_escape(x.expectation.describe()) +
             "\"";
      if (x.passed) {
        out += "/>\n";
        continue;
      }
      out += ">\n      <failure message=\"" + xml_escape(x.detail) + "\">";
      for (const auto& n : x.nearest) out += xml_escape(session::trace_line(n));
      out += "</failure>\n    </testcase>\n";
    }
    out += "  </testsuite>\n";
  }
  out += "  <testsuite name=\"coverage\" tests=\"1\" failures=\"" + std::string(suite.coverage.complete() ? "0" : "1") + "\">\n";
  out += "    <testcase classname=\"coverage\" name=\"accepted transition cells covered (" +
         std::to_string(suite.coverage.accepted_cells - suite.coverage.missing.size()) + "/" +
         std::to_string(suite.coverage.accepted_cells) + ")\"";
  if (suite.coverage.complete()) {
    out += "/>\n";
  } else {
    std::vector<std::string> names;
    for (const auto& c : suite.coverage.missing) names.push_back(cell_name(c));
    out += ">\n      <failure message=\"uncovered cells\">" + xml_escape(text::join(names, " ")) +
           "</failure>\n    </testcase>\n";
  }
  out += "  </testsuite>\n</testsuites>\n";
  return out;
}

std::string format_report(const ScenarioReport& report) {
  std::string out = report.name + ": " + (report.passed() ? "PASS" : "FAIL") + "\n";
  for (const auto& r : report.results) {
    out += std::string("  [") + (r.passed ? "pass" : "FAIL") + "] " + r.expectation.describe() + " (" + r.detail + ")\n";
    for (const auto& n : r.nearest) out += "      near: " + session::trace_line(n);
  }
  return out;
}

session::MetricsReport score_trace(std::vector<session::TraceRecord> trace,
                                   const std::vector<session::Annotation>& annotations) {
  session::annotate(trace, annotations);
  return session::compute_metrics(trace);
}

}  // namespace mise::harness
