#ifndef RNND_STREAM_H_
#define RNND_STREAM_H_

#include <cstddef>
#include <functional>
#include <istream>
#include <span>
#include <vector>

#include "rnnd/bands.h"
#include "rnnd/denoiser.h"

namespace rnnd {

enum class ProcessingMode { kDenoise, kPassthrough, kOracle };

// Supplies the gains for frame `index` in oracle mode. Indices run over the
// ceil(n / 480) input frames only.
using GainSource = std::function<BandVector(std::size_t index)>;

// Wraps a Denoiser for arbitrary-length input and removes the one-hop
// algorithmic delay: the output has exactly as many samples as the input and
// sample n of the output corresponds to sample n of the input.
class AlignedStream {
 public:
  AlignedStream(Denoiser& denoiser, ProcessingMode mode, GainSource gains = {});

  // Appends every output sample that is ready to `out`.
  void write(std::span<const float> input, std::vector<float>& out);
  // Pads the final partial hop with zeros, flushes the delay line and
  // truncates the output to the input length.
  void finish(std::vector<float>& out);

  // One VAD probability per input hop (0 outside denoise mode).
  const std::vector<float>& vad() const { return vad_; }
  std::size_t frames() const { return frames_; }

 private:
  void process_hop(std::span<const float> hop, std::vector<float>& out,
                   bool record);

  Denoiser& denoiser_;
  ProcessingMode mode_;
  GainSource gains_;
  std::vector<float> pending_;
  std::vector<float> vad_;
  std::size_t frames_ = 0;
  std::size_t input_samples_ = 0;
  std::size_t output_samples_ = 0;
  std::size_t delay_remaining_ = kHopSize;
  bool finished_ = false;
};

// Options matching a mode: pass-through disables the comb filter so that unit
// gains reconstruct the input.
DenoiserOptions options_for(ProcessingMode mode, DenoiserOptions base = {});

struct StreamResult {
  std::vector<float> audio;
  std::vector<float> vad;
};

StreamResult process_signal(Denoiser& denoiser, std::span<const float> input,
                            ProcessingMode mode, GainSource gains = {});

// One line per frame with 22 comma- or space-separated gains in [0, 1].
// Blank lines and lines starting with '#' are skipped. Throws
// std::invalid_argument with the line number on malformed input.
std::vector<BandVector> parse_gain_lines(std::istream& in);

}  // namespace rnnd

#endif  // RNND_STREAM_H_
