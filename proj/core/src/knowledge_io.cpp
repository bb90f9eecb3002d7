#include "mise/knowledge/io.hpp"

#include <fstream>
#include <sstream>

#include "mise/common/error.hpp"
#include "mise/common/text.hpp"

namespace mise::knowledge {

using nlohmann::json;

namespace {

template <typename F>
auto schema_guard(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SchemaViolation, e.what());
  }
}

json line_json(std::string_view line, std::size_t lineno, std::string_view what) {
  try {
    return json::parse(line);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string(what) + " line " + std::to_string(lineno) + ": " + e.what());
  }
}

}  // namespace

json to_json(const RecipeKnowledge& k) {
  json sentences = json::array();
  for (const auto& s : k.sentences) {
    json kfs = json::array();
    for (const auto& kf : s.keyframes) kfs.push_back({{"t", kf.timestamp}, {"hash", kf.content_hash}});
    sentences.push_back({{"index", s.index},
                         {"text", s.text},
                         {"t_start", s.t_start},
                         {"t_end", s.t_end},
                         {"keyframes", kfs},
                         {"visual_description", s.visual_description},
                         {"audio_description", s.audio_description}});
  }
  json ingredients = json::array();
  for (const auto& i : k.ingredients) {
    ingredients.push_back({{"name", i.name}, {"quantity", i.quantity}, {"first_mention", i.first_mention}});
  }
  json steps = json::array();
  for (const auto& s : k.steps) {
    steps.push_back({{"index", s.index},
                     {"summary", s.summary},
                     {"first_sentence", s.first_sentence},
                     {"last_sentence", s.last_sentence}});
  }
  return {{"schema_version", k.schema_version},
          {"recipe_id", k.recipe_id},
          {"title", k.title},
          {"video_duration", k.video_duration},
          {"sentences", sentences},
          {"ingredients", ingredients},
          {"steps", steps}};
}

RecipeKnowledge from_json(const json& j) {
  return schema_guard([&] {
    RecipeKnowledge k;
    k.schema_version = j.at("schema_version").get<int>();
    k.recipe_id = j.at("recipe_id").get<std::string>();
    k.title = j.at("title").get<std::string>();
    k.video_duration = j.at("video_duration").get<double>();
    for (const auto& s : j.at("sentences")) {
      SentenceUnit u;
      u.index = s.at("index").get<std::size_t>();
      u.text = s.at("text").get<std::string>();
      u.t_start = s.at("t_start").get<double>();
      u.t_end = s.at("t_end").get<double>();
      for (const auto& kf : s.at("keyframes")) {
        u.keyframes.push_back({kf.at("t").get<double>(), kf.at("hash").get<std::string>()});
      }
      u.visual_description = s.at("visual_description").get<std::string>();
      u.audio_description = s.at("audio_description").get<std::string>();
      k.sentences.push_back(std::move(u));
    }
    for (const auto& i : j.at("ingredients")) {
      k.ingredients.push_back({i.at("name").get<std::string>(), i.at("quantity").get<std::string>(),
                               i.at("first_mention").get<std::size_t>()});
    }
    for (const auto& s : j.at("steps")) {
      k.steps.push_back({s.at("index").get<std::size_t>(), s.at("summary").get<std::string>(),
                         s.at("first_sentence").get<std::size_t>(), s.at("last_sentence").get<std::size_t>()});
    }
    return k;
  });
}

std::string to_canonical_json(const RecipeKnowledge& k) {
  return to_json(k).dump(2, ' ', false, json::error_handler_t::strict) + "\n";
}

RecipeKnowledge parse_knowledge(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::SchemaViolation, std::string("not valid JSON: ") + e.what());
  }
  auto k = from_json(j);
  validate(k);
  return k;
}

RecipeKnowledge load_knowledge(const std::filesystem::path& path) { return parse_knowledge(read_file(path)); }

void save_knowledge(const RecipeKnowledge& k, const std::filesystem::path& path) {
  validate(k);
  write_file(path, to_canonical_json(k));
}

TimedTranscript parse_transcript(std::string_view text) {
  TimedTranscript t;
  std::size_t lineno = 0;
  for (const auto& raw : text::split(text, '\n')) {
    ++lineno;
    const auto line = text::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto j = line_json(line, lineno, "transcript");
    try {
      if (j.contains("language")) {
        t.language = j.at("language").get<std::string>();
        continue;
      }
      t.words.push_back({j.at("w").get<std::string>(), j.at("s").get<double>(), j.at("e").get<double>()});
    } catch (const json::exception& e) {
      throw Error(ErrorCode::ParseError, "transcript line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return t;
}

TimedTranscript read_transcript(const std::filesystem::path& path) { return parse_transcript(read_file(path)); }

std::vector<FrameRecord> parse_frame_manifest(std::string_view text) {
  std::vector<FrameRecord> frames;
  std::size_t lineno = 0;
  for (const auto& raw : text::split(text, '\n')) {
    ++lineno;
    const auto line = text::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto j = line_json(line, lineno, "frame manifest");
    try {
      FrameRecord f;
      f.timestamp = j.at("t").get<double>();
      if (j.contains("d")) f.descriptor = j.at("d").get<std::vector<double>>();
      if (j.contains("image")) f.image_path = j.at("image").get<std::string>();
      frames.push_back(std::move(f));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::ParseError, "frame manifest line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return frames;
}

std::vector<FrameRecord> read_frame_manifest(const std::filesystem::path& path) {
  return parse_frame_manifest(read_file(path));
}

std::string frame_manifest_line(const FrameRecord& frame) {
  json j = {{"t", frame.timestamp}, {"d", frame.descriptor}};
  if (!frame.image_path.empty()) j["image"] = frame.image_path;
  return j.dump();
}

RecipeOutline parse_outline(std::string_view text) {
  RecipeOutline out;
  std::size_t lineno = 0;
  for (const auto& raw : text::split(text, '\n')) {
    ++lineno;
    const auto line = text::trim(raw);
    if (line.empty()) continue;
    const auto where = "outline line " + std::to_string(lineno);
    std::istringstream in(line);
    std::string kind;
    in >> kind;
    kind = text::lowercase(kind);
    if (kind == "step") {
      std::string range;
      in >> range;
      const auto dash = range.find('-');
      if (dash == std::string::npos) throw Error(ErrorCode::ParseError, where + ": expected <first>-<last>");
      Step s;
      s.index = out.steps.size();
      try {
        s.first_sentence = std::stoul(range.substr(0, dash));
        s.last_sentence = std::stoul(range.substr(dash + 1));
      } catch (const std::exception&) {
        throw Error(ErrorCode::ParseError, where + ": bad sentence range '" + range + "'");
      }
      std::string rest;
      std::getline(in, rest);
      s.summary = text::trim(rest);
      out.steps.push_back(std::move(s));
    } else if (kind == "ingredient") {
      Ingredient ing;
      std::string idx;
      in >> idx;
      try {
        ing.first_mention = std::stoul(idx);
      } catch (const std::exception&) {
        throw Error(ErrorCode::ParseError, where + ": bad first_mention '" + idx + "'");
      }
      std::string rest;
      std::getline(in, rest);
      const auto bar = rest.find('|');
      ing.name = text::trim(rest.substr(0, bar));
      if (bar != std::string::npos) ing.quantity = text::trim(rest.substr(bar + 1));
      out.ingredients.push_back(std::move(ing));
    } else {
      throw Error(ErrorCode::ParseError, where + ": unknown record '" + kind + "'");
    }
  }
  return out;
}

RecipeOutline parse_outline_override(std::string_view json_text) {
  return schema_guard([&] {
    const auto j = json::parse(json_text);
    RecipeOutline out;
    if (j.contains("ingredients")) {
      for (const auto& i : j.at("ingredients")) {
        out.ingredients.push_back({i.at("name").get<std::string>(), i.value("quantity", std::string{}),
                                   i.at("first_mention").get<std::size_t>()});
      }
    }
    if (j.contains("steps")) {
      for (const auto& s : j.at("steps")) {
        out.steps.push_back({out.steps.size(), s.at("summary").get<std::string>(),
                             s.at("first_sentence").get<std::size_t>(), s.at("last_sentence").get<std::size_t>()});
      }
    }
    return out;
  });
}

std::string warnings_jsonl(const std::vector<Warning>& warnings) {
  std::string out;
  for (const auto& w : warnings) {
    json j = {{"code", w.code}, {"message", w.message}};
    j["sentence"] = w.sentence ? json(*w.sentence) : json(nullptr);
    out += j.dump() + "\n";
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

}  // namespace mise::knowledge
