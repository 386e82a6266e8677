#ifndef RNND_AUDIO_IO_H_
#define RNND_AUDIO_IO_H_

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rnnd {

class AudioFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SampleFormat { kPcm16, kFloat32 };

// Mono 48 kHz audio with samples in [-1, 1).
struct Audio {
  std::vector<float> samples;
  int sample_rate = 48000;
  SampleFormat format = SampleFormat::kPcm16;
};

// Accepts PCM16 or IEEE float32 WAV (plain or WAVE_FORMAT_EXTENSIBLE), mono,
// 48 kHz. Anything else throws AudioFormatError naming what was found.
Audio read_wav(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> write_wav(const Audio& audio);

// s16le <-> float with 1/32768 scaling; encoding rounds and saturates.
std::vector<float> decode_pcm16(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> encode_pcm16(std::span<const float> samples);

}  // namespace rnnd

#endif  // RNND_AUDIO_IO_H_
