#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mise/common/clock.hpp"

namespace mise::monitor {

struct Observation {
  std::uint64_t tick_id = 0;
  SessionTime timestamp{0};
  std::string action;
  std::optional<std::size_t> matched_step;
  std::vector<std::string> visible_items;
  std::vector<std::string> sounds;
  std::string raw_descriptor;
  // Set when the perceiver failed; all descriptive fields are then empty.
  bool degraded = false;

  bool operator==(const Observation&) const = default;

  // One-line summary used in memory records and prompts.
  std::string summary() const;
};

struct Judgment {
  std::uint64_t judgment_id = 0;
  std::uint64_t tick_id = 0;
  bool relevant = false;
  // Only defined when relevant.
  std::optional<bool> correct;
  std::vector<std::size_t> missed_steps;
  std::optional<std::size_t> advanced_to;
  std::optional<std::size_t> matched_step;
  bool degraded = false;

  bool operator==(const Judgment&) const = default;

  std::string summary() const;
};

struct ProgressState {
  std::size_t current_step = 0;
  std::set<std::size_t> completed_steps;
  // Declared by the user; never reported as missed.
  std::set<std::size_t> skipped_steps;

  bool operator==(const ProgressState&) const = default;
};

}  // namespace mise::monitor
