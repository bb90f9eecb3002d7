#include "mise/knowledge/audio.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "mise/common/error.hpp"

namespace mise::knowledge {
namespace {

std::uint32_t le32(std::string_view b, std::size_t at) {
  return static_cast<std::uint32_t>(static_cast<unsigned char>(b[at])) |
         static_cast<std::uint32_t>(static_cast<unsigned char>(b[at + 1])) << 8 |
         static_cast<std::uint32_t>(static_cast<unsigned char>(b[at + 2])) << 16 |
         static_cast<std::uint32_t>(static_cast<unsigned char>(b[at + 3])) << 24;
}

std::uint16_t le16(std::string_view b, std::size_t at) {
  return static_cast<std::uint16_t>(static_cast<unsigned char>(b[at]) |
                                    static_cast<unsigned char>(b[at + 1]) << 8);
}

void put32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
}

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorCode::ParseError, "wav: " + what); }

}  // namespace

std::span<const float> AudioTrack::window(double t_start, double t_end) const {
  if (sample_rate <= 0 || samples.empty() || !(t_end > t_start)) return {};
  const auto n = samples.size();
  auto clamp_index = [&](double t) {
    const double idx = std::floor(t * sample_rate);
    if (idx <= 0) return std::size_t{0};
    return std::min(n, static_cast<std::size_t>(idx));
  };
  const auto b = clamp_index(t_start);
  const auto e = clamp_index(t_end);
  return std::span<const float>(samples).subspan(b, e - b);
}

AudioTrack parse_wav(std::string_view b) {
  if (b.size() < 12 || b.substr(0, 4) != "RIFF" || b.substr(8, 4) != "WAVE") bad("not a RIFF/WAVE file");

  std::uint16_t format = 0;
  std::uint16_t channels = 0;
  std::uint32_t rate = 0;
  std::uint16_t bits = 0;
  std::string_view data;
  bool have_fmt = false;
  bool have_data = false;

  std::size_t at = 12;
  while (at + 8 <= b.size()) {
    const auto id = b.substr(at, 4);
    const auto size = le32(b, at + 4);
    const auto body = at + 8;
    if (body + size > b.size()) bad("truncated chunk");
    if (id == "fmt ") {
      if (size < 16) bad("short fmt chunk");
      format = le16(b, body);
      channels = le16(b, body + 2);
      rate = le32(b, body + 4);
      bits = le16(b, body + 14);
      have_fmt = true;
    } else if (id == "data") {
      data = b.substr(body, size);
      have_data = true;
    }
    at = body + size + (size & 1u);
  }
  if (!have_fmt || !have_data) bad("missing fmt or data chunk");
  if (channels == 0 || rate == 0) bad("zero channels or sample rate");

  const bool pcm16 = format == 1 && bits == 16;
  const bool f32 = format == 3 && bits == 32;
  if (!pcm16 && !f32) bad("unsupported sample format");

  const std::size_t bytes_per_sample = bits / 8;
  const std::size_t frame_bytes = bytes_per_sample * channels;
  const std::size_t frames = data.size() / frame_bytes;

  AudioTrack track;
  track.sample_rate = static_cast<int>(rate);
  track.samples.resize(frames);
  for (std::size_t f = 0; f < frames; ++f) {
    double acc = 0.0;
    for (std::size_t c = 0; c < channels; ++c) {
      const auto off = f * frame_bytes + c * bytes_per_sample;
      if (pcm16) {
        acc += static_cast<std::int16_t>(le16(data, off)) / 32768.0;
      } else {
        const std::uint32_t raw = le32(data, off);
        float v;
        std::memcpy(&v, &raw, sizeof v);
        acc += v;
      }
    }
    track.samples[f] = static_cast<float>(acc / channels);
  }
  return track;
}

AudioTrack read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_wav(ss.str());
}

std::string encode_wav_pcm16(const AudioTrack& track) {
  const auto data_bytes = static_cast<std::uint32_t>(track.samples.size() * 2);
  std::string out;
  out.reserve(44 + data_bytes);
  out += "RIFF";
  put32(out, 36 + data_bytes);
  out += "WAVEfmt ";
  put32(out, 16);
  put16(out, 1);
  put16(out, 1);
  put32(out, static_cast<std::uint32_t>(track.sample_rate));
  put32(out, static_cast<std::uint32_t>(track.sample_rate * 2));
  put16(out, 2);
  put16(out, 16);
  out += "data";
  put32(out, data_bytes);
  for (float s : track.samples) {
    const auto clamped = std::clamp(static_cast<double>(s), -1.0, 1.0);
    put16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(std::lround(clamped * 32767.0))));
  }
  return out;
}

double rms(std::span<const float> samples) {
  if (samples.empty()) return 0.0;
  double sum = 0.0;
  for (float s : samples) sum += static_cast<double>(s) * s;
  return std::sqrt(sum / static_cast<double>(samples.size()));
}

}  // namespace mise::knowledge
