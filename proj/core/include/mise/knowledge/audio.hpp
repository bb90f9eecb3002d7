#pragma once

#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

namespace mise::knowledge {

// Mono samples in [-1, 1].
struct AudioTrack {
  int sample_rate = 16000;
  std::vector<float> samples;

  double duration() const {
    return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate : 0.0;
  }
  std::span<const float> window(double t_start, double t_end) const;
};

// RIFF/WAVE with PCM 16-bit or IEEE float 32-bit samples; multi-channel input
// is averaged to mono. Throws ParseError.
AudioTrack parse_wav(std::string_view bytes);
AudioTrack read_wav(const std::filesystem::path& path);
std::string encode_wav_pcm16(const AudioTrack& track);

double rms(std::span<const float> samples);

}  // namespace mise::knowledge
