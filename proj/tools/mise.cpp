// mise: command-line front end for the engine.

#include <unistd.h>

#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mise/common/error.hpp"
#include "mise/harness/runner.hpp"
#include "mise/knowledge/io.hpp"
#include "mise/knowledge/pipeline.hpp"
#include "mise/orchestrator/transition.hpp"
#include "mise/session/adapters.hpp"
#include "mise/session/config.hpp"
#include "mise/session/metrics.hpp"
#include "mise/session/protocol.hpp"
#include "mise/session/remote.hpp"
#include "mise/session/session.hpp"
#include "mise/session/trace.hpp"

namespace fs = std::filesystem;
using namespace mise;

namespace {

struct DistillArgs {
  std::string transcript, frames, audio, out, outline, warnings, recipe_id, title;
  double scene_threshold = knowledge::kDefaultSceneThreshold;
  double gap_seconds = 1.5;
  std::string describer = "mock";
};

int run_distill(const DistillArgs& a) {
  knowledge::DistillInputs in;
  in.transcript = knowledge::read_transcript(a.transcript);
  in.frames = knowledge::read_frame_manifest(a.frames);
  if (!a.audio.empty()) in.audio = knowledge::read_wav(a.audio);
  in.recipe_id = a.recipe_id.empty() ? fs::path(a.out).stem().string() : a.recipe_id;
  in.title = a.title.empty() ? in.recipe_id : a.title;
  if (!a.outline.empty()) in.outline_override = knowledge::parse_outline_override(knowledge::read_file(a.outline));

  knowledge::DistillOptions opts;
  opts.scene_threshold = a.scene_threshold;
  opts.segment.gap_seconds = a.gap_seconds;

  std::unique_ptr<knowledge::VisualDescriber> visual;
  std::unique_ptr<knowledge::AudioDescriber> audio;
  std::unique_ptr<knowledge::Outliner> outliner;
  if (a.describer == "remote") {
    const auto env = session::RemoteSettings::from_env();
    auto client = std::make_shared<const session::RemoteClient>(env.describer_url, env.api_key);
    visual = std::make_unique<session::RemoteVisualDescriber>(client);
    audio = std::make_unique<session::RemoteAudioDescriber>(client);
    outliner = std::make_unique<session::RemoteOutliner>(client);
  } else {
    visual = std::make_unique<knowledge::EchoVisualDescriber>();
    audio = std::make_unique<knowledge::RmsAudioDescriber>();
    outliner = std::make_unique<knowledge::SentenceOutliner>();
  }

  const auto result = knowledge::distill(in, opts, {*visual, *audio, *outliner});
  knowledge::save_knowledge(result.knowledge, a.out);
  const auto warnings_path = a.warnings.empty() ? fs::path(a.out).replace_extension(".warnings.jsonl") : fs::path(a.warnings);
  knowledge::write_file(warnings_path, knowledge::warnings_jsonl(result.warnings));
  std::cerr << "distilled " << result.knowledge.sentences.size() << " sentences, " << result.knowledge.steps.size()
            << " steps, " << result.cuts.cuts.size() << " scene cuts, " << result.warnings.size() << " warnings\n";
  return 0;
}

struct ServeArgs {
  std::string recipe, config;
  bool mock_all = false;
  bool simulated = false;
  bool recover = false;
  int port = 0;
};

int run_serve(const ServeArgs& a) {
  auto cfg = a.config.empty() ? session::SessionConfig{} : session::load_config(a.config);
  if (!a.recipe.empty()) cfg.recipe = a.recipe;
  if (cfg.recipe.empty()) throw Error(ErrorCode::InvalidInput, "no recipe given (--recipe or config \"recipe\")");

  auto adapters = session::make_adapters(cfg, a.mock_all);
  auto s = a.recover ? session::Session::recover(cfg, adapters.view()) : session::Session::start(cfg, adapters.view());
  auto* scripted = dynamic_cast<monitor::ScriptedPerceiver*>(adapters.perceiver.get());

  session::ServerOptions opts;
  opts.simulated_clock = a.simulated;
  session::SessionServer server(*s, opts, scripted);

  if (a.port > 0) {
    std::cerr << "listening on 127.0.0.1:" << a.port << "\n";
    const int fd = session::accept_one(a.port);
    auto buffer = std::make_shared<std::string>();
    server.run([fd, buffer] { return session::read_socket_line(fd, *buffer); },
               [fd](const std::string& line) { session::write_socket_line(fd, line); });
    ::close(fd);
  } else {
    server.run(
        []() -> std::optional<std::string> {
          std::string line;
          if (!std::getline(std::cin, line)) return std::nullopt;
          return line;
        },
        [](const std::string& line) { std::cout << line << '\n' << std::flush; });
  }
  return 0;
}

int run_replay(const std::string& path) {
  const auto trace = session::read_trace(path);
  std::size_t mismatches = 0;
  for (const auto& r : trace) {
    std::cout << r.seq << "  " << to_seconds(r.at) << "s  " << session::to_string(r.stimulus) << "  "
              << code(r.from_state) << " -> " << code(r.to_state);
    if (r.classified_event) std::cout << "  " << code(*r.classified_event);
    if (r.rejected) std::cout << "  rejected";
    if (r.error) std::cout << "  error=" << *r.error;
    if (r.utterance) std::cout << "  \"" << *r.utterance << "\"";
    std::cout << "\n";

    if (!r.classified_event || r.error) continue;
    const auto expected = transition(r.from_state, *r.classified_event);
    const bool ok = expected ? (!r.rejected && *expected == r.to_state) : (r.rejected && r.to_state == r.from_state);
    if (!ok) {
      ++mismatches;
      std::cout << "  ! transition mismatch at seq " << r.seq << "\n";
    }
  }
  std::cout << trace.size() << " records, " << mismatches << " transition mismatches\n";
  return mismatches == 0 ? 0 : 1;
}

int run_metrics(const std::vector<std::string>& paths, bool json) {
  std::vector<session::MetricsReport> reports;
  for (const auto& p : paths) {
    reports.push_back(session::compute_metrics(session::read_trace(p)));
    if (!json) std::cout << p << ": " << session::format_report(reports.back()) << "\n";
  }
  const auto total = session::aggregate(reports);
  if (json) {
    nlohmann::json j = {{"traces", nlohmann::json::array()}, {"aggregate", session::to_json(total)}};
    for (std::size_t i = 0; i < paths.size(); ++i)
      j["traces"].push_back({{"file", paths[i]}, {"metrics", session::to_json(reports[i])}});
    std::cout << j.dump(2) << "\n";
  } else if (paths.size() > 1) {
    std::cout << "aggregate: " << session::format_report(total) << "\n";
  }
  return 0;
}

std::optional<session::Annotation> ask_label(const session::TraceRecord& r) {
  std::cout << "\n[" << r.seq << "] \"" << r.utterance.value_or("") << "\"\n";
  if (r.classified_event) std::cout << "  classified: " << code(*r.classified_event) << "\n";
  if (r.response_text) std::cout << "  response:   " << *r.response_text << "\n";
  std::string line;
  for (;;) {
    std::cout << "  ground-truth event (E1..E10, enter = keep classified): " << std::flush;
    if (!std::getline(std::cin, line)) return std::nullopt;
    std::optional<EventKind> ev = line.empty() ? r.classified_event : parse_event(line);
    if (!ev) continue;
    for (;;) {
      std::cout << "  response correct? [y/n]: " << std::flush;
      if (!std::getline(std::cin, line)) return std::nullopt;
      if (line == "y" || line == "n") return session::Annotation{r.seq, *ev, line == "y"};
    }
  }
}

int run_annotate(const std::string& path, const std::string& labels, const std::string& out) {
  auto trace = session::read_trace(path);
  std::vector<session::Annotation> anns;
  if (!labels.empty()) {
    anns = session::parse_annotations(knowledge::read_file(labels));
  } else {
    for (const auto& r : trace) {
      if (!r.is_query()) continue;
      auto a = ask_label(r);
      if (!a) break;
      anns.push_back(*a);
    }
  }
  session::annotate(trace, anns);
  const fs::path dest = out.empty() ? fs::path(path) : fs::path(out);
  std::ofstream f(dest, std::ios::trunc);
  if (!f) throw Error(ErrorCode::IoError, "cannot write " + dest.string());
  session::write_trace(trace, f);
  std::cerr << "annotated " << anns.size() << " queries -> " << dest.string() << "\n";
  return 0;
}

int run_conformance(const std::string& table_path) {
  const auto& table = TransitionTable::standard();
  std::cout << table.to_text();
  std::cout << "rejected cells: " << table.rejected_count() << "\n";
  if (table_path.empty()) return 0;
  const auto fixture = TransitionTable::parse(knowledge::read_file(table_path));
  std::size_t diff = 0;
  for (auto s : kAllStates) {
    for (auto e : kAllEvents) {
      if (fixture.lookup(s, e) == table.lookup(s, e)) continue;
      ++diff;
      std::cout << "mismatch " << code(s) << "/" << code(e) << "\n";
    }
  }
  std::cout << (diff == 0 ? "conformant with " : "NOT conformant with ") << table_path << " (70 cells, " << diff
            << " mismatches)\n";
  return diff == 0 ? 0 : 1;
}

int run_export(const std::string& trace_path, const std::string& session_path, const std::string& out, bool all) {
  auto trace = session::read_trace(trace_path);
  if (!session_path.empty()) {
    std::ifstream in(session_path);
    if (!in) throw Error(ErrorCode::IoError, "cannot read " + session_path);
    const auto store = memory::MemoryStore::load(in);
    std::map<std::uint64_t, std::string> responses;
    for (const auto& r : store->snapshot())
      if (r.kind == memory::RecordKind::Response && r.links.response_id) responses[*r.links.response_id] = r.text;
    for (auto& r : trace) {
      if (r.response_id && !r.response_text && responses.contains(*r.response_id))
        r.response_text = responses[*r.response_id];
    }
    const auto queries = std::count_if(trace.begin(), trace.end(), [](const auto& r) { return r.is_query(); });
    if (static_cast<std::size_t>(queries) != store->count(memory::RecordKind::Utterance))
      std::cerr << "warning: trace has " << queries << " utterances, memory has "
                << store->count(memory::RecordKind::Utterance) << "\n";
  }
  std::vector<session::TraceRecord> selected;
  for (const auto& r : trace)
    if (all || r.is_query()) selected.push_back(r);
  if (out.empty() || out == "-") {
    session::write_trace(selected, std::cout);
  } else {
    std::ofstream f(out, std::ios::trunc);
    if (!f) throw Error(ErrorCode::IoError, "cannot write " + out);
    session::write_trace(selected, f);
  }
  return 0;
}

int run_harness(const std::string& dir, const std::string& junit, bool quiet) {
  const auto suite = harness::run_directory(dir);
  if (!quiet) {
    for (const auto& r : suite.reports) std::cout << harness::format_report(r);
  }
  const auto& c = suite.coverage;
  std::cout << "coverage: " << (c.accepted_cells - c.missing.size()) << "/" << c.accepted_cells
            << " accepted transition cells\n";
  for (const auto& m : c.missing) std::cout << "  uncovered " << code(m.first) << "/" << code(m.second) << "\n";
  const fs::path junit_path = junit.empty() ? fs::path(dir) / "junit.xml" : fs::path(junit);
  knowledge::write_file(junit_path, harness::junit_xml(suite));
  std::cout << "junit report: " << junit_path.string() << "\n";
  std::cout << (suite.passed() ? "PASS" : "FAIL") << "\n";
  return suite.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mise: recipe knowledge distillation and mixed-initiative cooking assistance engine"};
  app.require_subcommand(1);

  DistillArgs d;
  auto* distill = app.add_subcommand("distill", "Compile a recipe video's transcript, frames and audio into knowledge");
  distill->add_option("--transcript", d.transcript, "Word-timed transcript (JSONL)")->required()->check(CLI::ExistingFile);
  distill->add_option("--frames", d.frames, "Frame manifest (JSONL)")->required()->check(CLI::ExistingFile);
  distill->add_option("--audio", d.audio, "Audio track (WAV)")->check(CLI::ExistingFile);
  distill->add_option("--out", d.out, "Output knowledge file (JSON)")->required();
  distill->add_option("--scene-threshold", d.scene_threshold, "Scene cut threshold")->capture_default_str();
  distill->add_option("--gap-seconds", d.gap_seconds, "Pause that ends a sentence")->capture_default_str();
  distill->add_option("--describer", d.describer, "Describer backend")
      ->check(CLI::IsMember({"mock", "remote"}))
      ->capture_default_str();
  distill->add_option("--outline", d.outline, "Hand-authored ingredients and steps (JSON)")->check(CLI::ExistingFile);
  distill->add_option("--warnings", d.warnings, "Warnings sidecar (default: <out>.warnings.jsonl)");
  distill->add_option("--recipe-id", d.recipe_id, "Recipe id (default: output file stem)");
  distill->add_option("--title", d.title, "Recipe title");

  ServeArgs sv;
  auto* serve = app.add_subcommand("serve", "Run a session over the line-delimited JSON protocol");
  serve->add_option("--recipe", sv.recipe, "Recipe knowledge file (overrides the config)");
  serve->add_option("--config", sv.config, "Session config (JSON)")->check(CLI::ExistingFile);
  serve->add_flag("--mock-all", sv.mock_all, "Use deterministic mocks for every adapter");
  serve->add_flag("--simulated-clock", sv.simulated, "Session time advances only on \"advance\" messages");
  serve->add_flag("--recover", sv.recover, "Resume from the config's session file");
  serve->add_option("--port", sv.port, "Serve one TCP client on 127.0.0.1 instead of stdio");

  std::string replay_path;
  auto* replay = app.add_subcommand("replay-trace", "Print a trace and check every transition against the table");
  replay->add_option("trace", replay_path)->required()->check(CLI::ExistingFile);

  std::vector<std::string> metric_paths;
  bool metrics_json = false;
  auto* metrics = app.add_subcommand("metrics", "Mapping and response accuracy of annotated traces");
  metrics->add_option("traces", metric_paths)->required()->check(CLI::ExistingFile);
  metrics->add_flag("--json", metrics_json);

  std::string ann_trace, ann_labels, ann_out;
  auto* annotate = app.add_subcommand("annotate", "Label queries with ground-truth events and response correctness");
  annotate->add_option("trace", ann_trace)->required()->check(CLI::ExistingFile);
  annotate->add_option("--labels", ann_labels, "Labels file (JSONL); prompts interactively when absent")
      ->check(CLI::ExistingFile);
  annotate->add_option("--out", ann_out, "Output trace (default: in place)");

  std::string table_path;
  auto* conformance = app.add_subcommand("conformance", "Print the transition table, optionally diffing a fixture");
  conformance->add_option("--table", table_path, "Fixture table to compare against")->check(CLI::ExistingFile);

  std::string ex_trace, ex_session, ex_out;
  bool ex_all = false;
  auto* exp = app.add_subcommand("export", "Dump a session trace for annotation and metrics");
  exp->add_option("--trace", ex_trace)->required()->check(CLI::ExistingFile);
  exp->add_option("--session", ex_session, "Session memory file")->check(CLI::ExistingFile);
  exp->add_option("--out", ex_out, "Output file (default: stdout)");
  exp->add_flag("--all", ex_all, "Keep tick, alert and idle records");

  std::string h_dir, h_junit;
  bool h_quiet = false;
  auto* harness_cmd = app.add_subcommand("harness", "Scenario harness");
  harness_cmd->require_subcommand(1);
  auto* h_run = harness_cmd->add_subcommand("run", "Run every scenario in a directory");
  h_run->add_option("dir", h_dir)->required()->check(CLI::ExistingDirectory);
  h_run->add_option("--junit", h_junit, "JUnit report path (default: DIR/junit.xml)");
  h_run->add_flag("--quiet", h_quiet);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*distill) return run_distill(d);
    if (*serve) return run_serve(sv);
    if (*replay) return run_replay(replay_path);
    if (*metrics) return run_metrics(metric_paths, metrics_json);
    if (*annotate) return run_annotate(ann_trace, ann_labels, ann_out);
    if (*conformance) return run_conformance(table_path);
    if (*exp) return run_export(ex_trace, ex_session, ex_out, ex_all);
    if (*h_run) return run_harness(h_dir, h_junit, h_quiet);
  } catch (const Error& e) {
    std::cerr << "mise: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "mise: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
