#include "mise/memory/store.hpp"

#include <algorithm>
#include <istream>
#include <mutex>
#include <ostream>

#include "mise/common/error.hpp"
#include "mise/common/text.hpp"

namespace mise::memory {

using nlohmann::json;

std::string_view to_string(RecordKind k) noexcept {
  switch (k) {
    case RecordKind::Utterance: return "utterance";
    case RecordKind::Response: return "response";
    case RecordKind::Observation: return "observation";
    case RecordKind::Judgment: return "judgment";
    case RecordKind::Alert: return "alert";
    case RecordKind::MediaAction: return "media_action";
  }
  return "?";
}

std::optional<RecordKind> parse_record_kind(std::string_view s) noexcept {
  for (auto k : {RecordKind::Utterance, RecordKind::Response, RecordKind::Observation, RecordKind::Judgment,
                 RecordKind::Alert, RecordKind::MediaAction}) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

json to_json(const MemoryRecord& r) {
  json links = json::object();
  if (r.links.step) links["step"] = *r.links.step;
  if (!r.links.sentences.empty()) links["sentences"] = r.links.sentences;
  if (r.links.tick_id) links["tick_id"] = *r.links.tick_id;
  if (r.links.response_id) links["response_id"] = *r.links.response_id;
  if (r.links.judgment_id) links["judgment_id"] = *r.links.judgment_id;
  return {{"id", r.record_id},
          {"kind", to_string(r.kind)},
          {"t_ms", r.timestamp.count()},
          {"text", r.text},
          {"links", links}};
}

MemoryRecord record_from_json(const json& j) {
  try {
    MemoryRecord r;
    r.record_id = j.at("id").get<std::uint64_t>();
    auto kind = parse_record_kind(j.at("kind").get<std::string>());
    if (!kind) throw Error(ErrorCode::ParseError, "unknown record kind " + j.at("kind").dump());
    r.kind = *kind;
    r.timestamp = SessionTime{j.at("t_ms").get<std::int64_t>()};
    r.text = j.at("text").get<std::string>();
    const auto& l = j.at("links");
    if (l.contains("step")) r.links.step = l.at("step").get<std::size_t>();
    if (l.contains("sentences")) r.links.sentences = l.at("sentences").get<std::vector<std::size_t>>();
    if (l.contains("tick_id")) r.links.tick_id = l.at("tick_id").get<std::uint64_t>();
    if (l.contains("response_id")) r.links.response_id = l.at("response_id").get<std::uint64_t>();
    if (l.contains("judgment_id")) r.links.judgment_id = l.at("judgment_id").get<std::uint64_t>();
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("memory record: ") + e.what());
  }
}

std::uint64_t MemoryStore::append(MemoryRecord r) {
  if (r.kind == RecordKind::Observation && !r.links.tick_id) {
    throw Error(ErrorCode::InvalidInput, "observation record needs a tick_id link");
  }
  if (r.kind == RecordKind::Response && !r.links.response_id) {
    throw Error(ErrorCode::InvalidInput, "response record needs a response_id link");
  }

  std::unique_lock lock(mutex_);
  const std::uint64_t last = records_.empty() ? 0 : records_.back().record_id;
  if (r.record_id != 0 && r.record_id <= last) {
    auto it = std::lower_bound(records_.begin(), records_.end(), r.record_id,
                               [](const MemoryRecord& a, std::uint64_t id) { return a.record_id < id; });
    if (it != records_.end() && it->record_id == r.record_id && *it == r) return r.record_id;
    throw Error(ErrorCode::InvalidInput, "record id " + std::to_string(r.record_id) + " conflicts with the store");
  }
  if (!records_.empty() && r.timestamp < records_.back().timestamp) {
    throw Error(ErrorCode::ClockViolation, "record timestamp " + std::to_string(r.timestamp.count()) +
                                               " ms precedes " + std::to_string(records_.back().timestamp.count()) +
                                               " ms");
  }
  if (r.record_id == 0) r.record_id = last + 1;
  records_.push_back(r);
  if (sink_) {
    *sink_ << to_json(r).dump() << '\n';
    sink_->flush();
  }
  return r.record_id;
}

std::vector<MemoryRecord> MemoryStore::snapshot() const {
  std::shared_lock lock(mutex_);
  return records_;
}

std::optional<MemoryRecord> MemoryStore::find(std::uint64_t record_id) const {
  std::shared_lock lock(mutex_);
  auto it = std::lower_bound(records_.begin(), records_.end(), record_id,
                             [](const MemoryRecord& a, std::uint64_t id) { return a.record_id < id; });
  if (it == records_.end() || it->record_id != record_id) return std::nullopt;
  return *it;
}

std::size_t MemoryStore::size() const {
  std::shared_lock lock(mutex_);
  return records_.size();
}

std::size_t MemoryStore::count(RecordKind kind) const {
  std::shared_lock lock(mutex_);
  return static_cast<std::size_t>(
      std::count_if(records_.begin(), records_.end(), [&](const MemoryRecord& r) { return r.kind == kind; }));
}

std::uint64_t MemoryStore::last_id() const {
  std::shared_lock lock(mutex_);
  return records_.empty() ? 0 : records_.back().record_id;
}

std::vector<MemoryRecord> MemoryStore::latest(std::initializer_list<RecordKind> kinds, std::size_t n) const {
  std::shared_lock lock(mutex_);
  std::vector<MemoryRecord> out;
  for (auto it = records_.rbegin(); it != records_.rend() && out.size() < n; ++it) {
    if (std::find(kinds.begin(), kinds.end(), it->kind) != kinds.end()) out.push_back(*it);
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::unique_ptr<MemoryStore> MemoryStore::load(std::istream& in) {
  auto store = std::make_unique<MemoryStore>();
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw Error(ErrorCode::ParseError, "session file line " + std::to_string(lineno) + ": " + e.what());
    }
    store->append(record_from_json(j));
  }
  return store;
}

double RecencyLexicalScorer::score(std::string_view query, const MemoryRecord& record,
                                   std::uint64_t newest_id) const {
  const auto overlap = text::shared_token_count(text::content_token_set(query), text::content_token_set(record.text));
  const auto age = newest_id >= record.record_id ? newest_id - record.record_id : 0;
  return static_cast<double>(overlap) / (1.0 + decay_ * static_cast<double>(age));
}

std::vector<MemoryRecord> retrieve(const MemoryStore& store, std::string_view query, std::size_t k,
                                   const RecordScorer& scorer) {
  auto records = store.snapshot();
  if (records.empty() || k == 0) return {};
  const auto newest = records.back().record_id;

  std::vector<std::pair<double, std::size_t>> scored;
  scored.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) scored.emplace_back(scorer.score(query, records[i], newest), i);

  const auto n = std::min(k, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(n), scored.end(),
                    [&](const auto& a, const auto& b) {
                      if (a.first != b.first) return a.first > b.first;
                      return records[a.second].record_id > records[b.second].record_id;
                    });
  std::vector<MemoryRecord> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(records[scored[i].second]);
  return out;
}

}  // namespace mise::memory
