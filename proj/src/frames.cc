#include "rnnd/frames.h"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rnnd {

double vorbis_window(std::size_t n, std::size_t window_size) {
  assert(n < window_size);
  const double s = std::sin(std::numbers::pi * static_cast<double>(n) /
                            static_cast<double>(window_size));
  return std::sin(0.5 * std::numbers::pi * s * s);
}

FrameTransform::FrameTransform() : fft_(kWindowSize) {
  for (std::size_t n = 0; n < kWindowSize; ++n) {
    window_[n] = vorbis_window(n, kWindowSize);
  }
}

SpectrumFrame FrameTransform::analyze(OverlapState& state,
                                      std::span<const double> hop) const {
  if (hop.size() != kHopSize) {
    throw std::invalid_argument("analyze: expected exactly 480 samples");
  }
  std::array<double, kWindowSize> frame;
  std::copy(state.input_buffer.begin(), state.input_buffer.end(),
            frame.begin());
  std::copy(hop.begin(), hop.end(), frame.begin() + state.input_buffer.size());
  std::copy(hop.end() - state.input_buffer.size(), hop.end(),
            state.input_buffer.begin());
  return transform(frame);
}

SpectrumFrame FrameTransform::analyze(OverlapState& state,
                                      std::span<const float> hop) const {
  if (hop.size() != kHopSize) {
    throw std::invalid_argument("analyze: expected exactly 480 samples");
  }
  Hop widened;
  std::copy(hop.begin(), hop.end(), widened.begin());
  return analyze(state, std::span<const double>(widened));
}

SpectrumFrame FrameTransform::transform(std::span<const double> frame) const {
  if (frame.size() != kWindowSize) {
    throw std::invalid_argument("transform: expected a 960-sample frame");
  }
  std::array<double, kWindowSize> windowed;
  for (std::size_t n = 0; n < kWindowSize; ++n) {
    windowed[n] = frame[n] * window_[n];
  }
  SpectrumFrame out;
  fft_.forward(windowed, out.bins);
  return out;
}

Hop FrameTransform::synthesize(OverlapState& state,
                               const SpectrumFrame& spectrum) const {
  std::array<double, kWindowSize> time;
  fft_.inverse(spectrum.bins, time);
  for (std::size_t n = 0; n < kWindowSize; ++n) time[n] *= window_[n];

  Hop out;
  for (std::size_t n = 0; n < kHopSize; ++n) {
    out[n] = time[n] + state.synthesis_overlap[n];
  }
  std::copy(time.begin() + kHopSize, time.end(),
            state.synthesis_overlap.begin());
  return out;
}

}  // namespace rnnd
