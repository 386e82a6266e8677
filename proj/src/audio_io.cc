#include "rnnd/audio_io.h"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace rnnd {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t le16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}
std::uint32_t le32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) |
         (static_cast<std::uint32_t>(p[3]) << 24);
}
void put16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}
void put32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}
void put_tag(std::vector<std::uint8_t>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

}  // namespace

std::vector<float> decode_pcm16(std::span<const std::uint8_t> bytes) {
  std::vector<float> out(bytes.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<float>(static_cast<std::int16_t>(le16(&bytes[2 * i]))) /
             32768.f;
  }
  return out;
}

std::vector<std::uint8_t> encode_pcm16(std::span<const float> samples) {
  std::vector<std::uint8_t> out;
  out.reserve(samples.size() * 2);
  for (float s : samples) {
    const long q = std::lround(static_cast<double>(s) * 32768.0);
    put16(out, static_cast<std::uint16_t>(
                   static_cast<std::int16_t>(std::clamp(q, -32768L, 32767L))));
  }
  return out;
}

Audio read_wav(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw AudioFormatError("input is not a RIFF/WAVE file");
  }
  bool have_fmt = false;
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  std::span<const std::uint8_t> data;
  bool have_data = false;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint8_t* chunk = bytes.data() + pos;
    const std::uint32_t size = le32(chunk + 4);
    const std::size_t body = pos + 8;
    const std::size_t available = bytes.size() - body;
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16 || size > available) throw AudioFormatError("WAV fmt chunk is malformed");
      const std::uint8_t* f = bytes.data() + body;
      format = le16(f);
      channels = le16(f + 2);
      rate = le32(f + 4);
      bits = le16(f + 14);
      if (format == kFormatExtensible) {
        if (size < 40) throw AudioFormatError("WAV extensible fmt chunk is malformed");
        format = le16(f + 24);  // first two bytes of the sub-format GUID
      }
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      // Streams written before their length was known often carry a bogus
      // size; take what is there.
      data = bytes.subspan(body, std::min<std::size_t>(size, available));
      have_data = true;
      break;
    }
    if (size > available) break;
    pos = body + size + (size & 1);
  }
  if (!have_fmt) throw AudioFormatError("WAV file has no fmt chunk");
  if (!have_data) throw AudioFormatError("WAV file has no data chunk");
  if (channels != 1) {
    throw AudioFormatError("expected mono audio, got " + std::to_string(channels) +
                           " channels");
  }
  if (rate != 48000) {
    throw AudioFormatError("input sample rate is " + std::to_string(rate) +
                           " Hz; 48000 Hz is required (resample first)");
  }

  Audio audio;
  audio.sample_rate = static_cast<int>(rate);
  if (format == kFormatPcm && bits == 16) {
    audio.format = SampleFormat::kPcm16;
    audio.samples = decode_pcm16(data);
  } else if (format == kFormatFloat && bits == 32) {
    audio.format = SampleFormat::kFloat32;
    audio.samples.resize(data.size() / 4);
    std::memcpy(audio.samples.data(), data.data(), audio.samples.size() * 4);
  } else {
    throw AudioFormatError("unsupported WAV encoding (format " + std::to_string(format) +
                           ", " + std::to_string(bits) +
                           " bits); use 16-bit PCM or 32-bit float");
  }
  return audio;
}

std::vector<std::uint8_t> write_wav(const Audio& audio) {
  const bool is_float = audio.format == SampleFormat::kFloat32;
  const std::uint16_t bits = is_float ? 32 : 16;
  const std::uint32_t data_bytes =
      static_cast<std::uint32_t>(audio.samples.size() * (bits / 8));

  std::vector<std::uint8_t> out;
  out.reserve(44 + data_bytes);
  put_tag(out, "RIFF");
  put32(out, 36 + data_bytes);
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put32(out, 16);
  put16(out, is_float ? kFormatFloat : kFormatPcm);
  put16(out, 1);
  put32(out, static_cast<std::uint32_t>(audio.sample_rate));
  put32(out, static_cast<std::uint32_t>(audio.sample_rate) * (bits / 8));
  put16(out, bits / 8);
  put16(out, bits);
  put_tag(out, "data");
  put32(out, data_bytes);
  if (is_float) {
    const auto* p = reinterpret_cast<const std::uint8_t*>(audio.samples.data());
    out.insert(out.end(), p, p + data_bytes);
  } else {
    const auto pcm = encode_pcm16(audio.samples);
    out.insert(out.end(), pcm.begin(), pcm.end());
  }
  return out;
}

}  // namespace rnnd
