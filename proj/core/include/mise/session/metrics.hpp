#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mise/session/trace.hpp"

namespace mise::session {

struct MetricsReport {
  std::size_t total_queries = 0;
  // Queries whose ground truth is not a follow-up (E7/E8).
  std::size_t mapped_queries = 0;
  std::size_t correct_mappings = 0;
  std::size_t correct_responses = 0;
  // Empty when the denominator is zero.
  std::optional<double> mapping_accuracy;
  std::optional<double> response_accuracy;

  bool operator==(const MetricsReport&) const = default;
};

// mapping_accuracy = correct_mappings / mapped_queries
// response_accuracy = correct_responses / total_queries
// Throws IncompleteAnnotation listing the seq of every unlabeled query.
MetricsReport compute_metrics(const std::vector<TraceRecord>& trace);

// Pools counts across traces; the accuracies are recomputed from the sums.
MetricsReport aggregate(const std::vector<MetricsReport>& reports);

nlohmann::json to_json(const MetricsReport& m);
std::string format_report(const MetricsReport& m);

// An annotated trace of `total` queries. The last `follow_ups` of them are
// E7/E8 and count only toward response accuracy; `correct_mappings` of the
// rest are mapped correctly; the first `correct_responses` are answered
// correctly. Throws InvalidInput when the counts do not fit.
std::vector<TraceRecord> synthesize_annotated_trace(std::size_t total, std::size_t correct_mappings,
                                                    std::size_t correct_responses, std::size_t follow_ups = 0);

}  // namespace mise::session
