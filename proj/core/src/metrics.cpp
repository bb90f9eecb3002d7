#include "mise/session/metrics.hpp"

#include <cstdio>

#include "mise/common/error.hpp"

namespace mise::session {
namespace {

void finalize(MetricsReport& m) {
  m.mapping_accuracy.reset();
  m.response_accuracy.reset();
  if (m.mapped_queries > 0)
    m.mapping_accuracy = static_cast<double>(m.correct_mappings) / static_cast<double>(m.mapped_queries);
  if (m.total_queries > 0)
    m.response_accuracy = static_cast<double>(m.correct_responses) / static_cast<double>(m.total_queries);
}

std::string fixed2(const std::optional<double>& v) {
  if (!v) return "-";
  char buf[16];
  std::snprintf(buf, sizeof buf, "%.2f", *v);
  return buf;
}

}  // namespace

MetricsReport compute_metrics(const std::vector<TraceRecord>& trace) {
  std::vector<std::uint64_t> missing;
  MetricsReport m;
  for (const auto& r : trace) {
    if (!r.is_query()) continue;
    if (!r.ground_truth_event || !r.response_correct) {
      missing.push_back(r.seq);
      continue;
    }
    ++m.total_queries;
    if (*r.response_correct) ++m.correct_responses;
    if (is_follow_up(*r.ground_truth_event)) continue;
    ++m.mapped_queries;
    if (r.classified_event == r.ground_truth_event) ++m.correct_mappings;
  }
  if (!missing.empty()) {
    std::string ids;
    for (auto id : missing) ids += (ids.empty() ? "" : ", ") + std::to_string(id);
    throw Error(ErrorCode::IncompleteAnnotation, "unannotated query records: " + ids);
  }
  finalize(m);
  return m;
}

MetricsReport aggregate(const std::vector<MetricsReport>& reports) {
  MetricsReport m;
  for (const auto& r : reports) {
    m.total_queries += r.total_queries;
    m.mapped_queries += r.mapped_queries;
    m.correct_mappings += r.correct_mappings;
    m.correct_responses += r.correct_responses;
  }
  finalize(m);
  return m;
}

nlohmann::json to_json(const MetricsReport& m) {
  nlohmann::json j = {{"total_queries", m.total_queries},
                      {"mapped_queries", m.mapped_queries},
                      {"correct_mappings", m.correct_mappings},
                      {"correct_responses", m.correct_responses},
                      {"mapping_accuracy", nullptr},
                      {"response_accuracy", nullptr}};
  if (m.mapping_accuracy) j["mapping_accuracy"] = *m.mapping_accuracy;
  if (m.response_accuracy) j["response_accuracy"] = *m.response_accuracy;
  return j;
}

std::string format_report(const MetricsReport& m) {
  return "queries " + std::to_string(m.total_queries) + "  mapped " + std::to_string(m.correct_mappings) + "/" +
         std::to_string(m.mapped_queries) + " (" + fixed2(m.mapping_accuracy) + ")  correct responses " +
         std::to_string(m.correct_responses) + "/" + std::to_string(m.total_queries) + " (" +
         fixed2(m.response_accuracy) + ")";
}

std::vector<TraceRecord> synthesize_annotated_trace(std::size_t total, std::size_t correct_mappings,
                                                    std::size_t correct_responses, std::size_t follow_ups) {
  if (follow_ups > total || correct_mappings > total - follow_ups || correct_responses > total)
    throw Error(ErrorCode::InvalidInput, "annotation counts do not fit the query total");
  static constexpr EventKind kTopLevel[] = {EventKind::FoodStateQuery, EventKind::StepQuery, EventKind::ProblemQuery,
                                            EventKind::GeneralVisualQuery};
  std::vector<TraceRecord> out;
  const std::size_t mapped = total - follow_ups;
  for (std::size_t i = 0; i < total; ++i) {
    TraceRecord r;
    r.seq = i + 1;
    r.stimulus = StimulusKind::Utterance;
    r.at = SessionTime{static_cast<std::int64_t>(i) * 3000};
    r.record_id = i + 1;
    r.utterance = "query " + std::to_string(i + 1);
    if (i < mapped) {
      const auto truth = kTopLevel[i % 4];
      r.ground_truth_event = truth;
      r.classified_event = i < correct_mappings ? truth : kTopLevel[(i + 1) % 4];
    } else {
      r.ground_truth_event = (i % 2 == 0) ? EventKind::FollowUpDetails : EventKind::FlagResponseWrong;
      r.classified_event = r.ground_truth_event;
    }
    r.from_state = DialogueState::Idle;
    r.to_state = DialogueState::Idle;
    r.response_correct = i < correct_responses;
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace mise::session
