#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "mise/common/clock.hpp"

namespace mise::memory {

enum class RecordKind : std::uint8_t { Utterance, Response, Observation, Judgment, Alert, MediaAction };

std::string_view to_string(RecordKind k) noexcept;
std::optional<RecordKind> parse_record_kind(std::string_view s) noexcept;

struct RecordLinks {
  std::optional<std::size_t> step;
  std::vector<std::size_t> sentences;
  std::optional<std::uint64_t> tick_id;
  std::optional<std::uint64_t> response_id;
  std::optional<std::uint64_t> judgment_id;

  bool operator==(const RecordLinks&) const = default;
};

struct MemoryRecord {
  // 0 means "assign on append".
  std::uint64_t record_id = 0;
  RecordKind kind = RecordKind::Utterance;
  SessionTime timestamp{0};
  std::string text;
  RecordLinks links;

  bool operator==(const MemoryRecord&) const = default;
};

nlohmann::json to_json(const MemoryRecord& r);
MemoryRecord record_from_json(const nlohmann::json& j);

// Append-only session memory. Ids strictly increase, timestamps never
// decrease. Appends optionally stream to a line-delimited session file.
class MemoryStore {
 public:
  MemoryStore() = default;
  MemoryStore(const MemoryStore&) = delete;
  MemoryStore& operator=(const MemoryStore&) = delete;

  // Streams every subsequent append to `sink` (one JSON object per line).
  void attach_sink(std::ostream* sink) { sink_ = sink; }

  // Returns the record id. A record carrying an id already in the store is a
  // no-op when identical and an InvalidInput error otherwise. Throws
  // ClockViolation when the timestamp precedes the last record, and
  // InvalidInput for observation records without a tick id or response
  // records without a response id.
  std::uint64_t append(MemoryRecord r);

  std::vector<MemoryRecord> snapshot() const;
  std::optional<MemoryRecord> find(std::uint64_t record_id) const;
  std::size_t size() const;
  std::size_t count(RecordKind kind) const;
  std::uint64_t last_id() const;

  // Most recent `n` records of the given kinds, oldest first.
  std::vector<MemoryRecord> latest(std::initializer_list<RecordKind> kinds, std::size_t n) const;

  // Rebuilds a store from a session file written by a previous run.
  static std::unique_ptr<MemoryStore> load(std::istream& in);

 private:
  mutable std::shared_mutex mutex_;
  std::vector<MemoryRecord> records_;
  std::ostream* sink_ = nullptr;
};

// Pluggable retrieval scoring.
class RecordScorer {
 public:
  virtual ~RecordScorer() = default;
  // newest_id is the largest record id in the store at query time.
  virtual double score(std::string_view query, const MemoryRecord& record, std::uint64_t newest_id) const = 0;
};

// shared content words / (1 + decay * (newest_id - record_id))
class RecencyLexicalScorer final : public RecordScorer {
 public:
  explicit RecencyLexicalScorer(double decay = 0.01) : decay_(decay) {}
  double score(std::string_view query, const MemoryRecord& record, std::uint64_t newest_id) const override;

 private:
  double decay_;
};

// Top-k by score, ties broken by higher record id. Empty store -> empty.
std::vector<MemoryRecord> retrieve(const MemoryStore& store, std::string_view query, std::size_t k,
                                   const RecordScorer& scorer);

}  // namespace mise::memory
