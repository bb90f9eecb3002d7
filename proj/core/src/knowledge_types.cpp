#include "mise/knowledge/types.hpp"

#include <cmath>

#include "mise/common/error.hpp"

namespace mise::knowledge {
namespace {

[[noreturn]] void violation(const std::string& what) { throw Error(ErrorCode::SchemaViolation, what); }

}  // namespace

std::vector<std::size_t> RecipeKnowledge::step_sentences(std::size_t step) const {
  std::vector<std::size_t> out;
  if (step >= steps.size()) return out;
  const auto& s = steps[step];
  for (auto i = s.first_sentence; i <= s.last_sentence && i < sentences.size(); ++i) out.push_back(i);
  return out;
}

void validate(const RecipeKnowledge& k) {
  if (k.schema_version != RecipeKnowledge::kSchemaVersion) {
    violation("unsupported schema_version " + std::to_string(k.schema_version));
  }
  if (k.sentences.empty()) violation("a recipe must have at least one sentence");
  if (!std::isfinite(k.video_duration) || k.video_duration < 0) violation("video_duration must be finite and >= 0");

  double prev_end = 0.0;
  for (std::size_t i = 0; i < k.sentences.size(); ++i) {
    const auto& s = k.sentences[i];
    const auto where = "sentence " + std::to_string(i);
    if (s.index != i) violation(where + ": index " + std::to_string(s.index) + " out of order");
    if (s.text.empty()) violation(where + ": empty text");
    if (!(s.t_start < s.t_end)) violation(where + ": t_start must be < t_end");
    if (s.t_start < prev_end) violation(where + ": overlaps previous sentence");
    if (s.t_end > k.video_duration) violation(where + ": ends after video_duration");
    for (const auto& kf : s.keyframes) {
      if (kf.timestamp < s.t_start || kf.timestamp > s.t_end) violation(where + ": keyframe outside interval");
    }
    prev_end = s.t_end;
  }

  for (std::size_t i = 0; i < k.ingredients.size(); ++i) {
    if (k.ingredients[i].first_mention >= k.sentences.size()) {
      violation("ingredient " + std::to_string(i) + ": first_mention references a missing sentence");
    }
  }

  bool have_prev = false;
  std::size_t prev_last = 0;
  for (std::size_t i = 0; i < k.steps.size(); ++i) {
    const auto& st = k.steps[i];
    const auto where = "step " + std::to_string(i);
    if (st.index != i) violation(where + ": index out of order");
    if (st.first_sentence > st.last_sentence) violation(where + ": empty sentence range");
    if (st.last_sentence >= k.sentences.size()) violation(where + ": range references a missing sentence");
    if (have_prev && st.first_sentence <= prev_last) violation(where + ": range overlaps or precedes previous step");
    prev_last = st.last_sentence;
    have_prev = true;
  }
}

}  // namespace mise::knowledge
