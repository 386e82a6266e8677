#ifndef RNND_FRAMES_H_
#define RNND_FRAMES_H_

#include <array>
#include <complex>
#include <cstddef>
#include <span>

#include "rnnd/config.h"
#include "rnnd/fft.h"

namespace rnnd {

// Half spectrum X(0..N/2) of one windowed frame. Bins 0 and N/2 are real.
struct SpectrumFrame {
  std::array<std::complex<double>, kSpectrumBins> bins{};

  std::complex<double>& operator[](std::size_t k) { return bins[k]; }
  const std::complex<double>& operator[](std::size_t k) const {
    return bins[k];
  }
};

using Hop = std::array<double, kHopSize>;

// w(n) = sin(pi/2 * sin^2(pi n / N)). Satisfies w^2(n) + w^2(n + N/2) = 1.
double vorbis_window(std::size_t n, std::size_t window_size);

// Streaming buffers for 50%-overlap analysis/synthesis; zero at stream start.
struct OverlapState {
  std::array<double, kWindowSize - kHopSize> input_buffer{};
  std::array<double, kWindowSize - kHopSize> synthesis_overlap{};

  void reset() { *this = OverlapState{}; }
};

// Window table and real DFT plan for the fixed 960-sample frame. The forward
// transform is unnormalized; the inverse carries the 1/N factor, so a frame
// passed through analyze() and synthesize() untouched comes back intact.
class FrameTransform {
 public:
  FrameTransform();

  std::span<const double> window() const { return window_; }

  // Windowed DFT of the previous hop followed by `hop` (exactly kHopSize
  // samples); shifts `hop` into the state. Throws std::invalid_argument on a
  // wrong hop length.
  SpectrumFrame analyze(OverlapState& state, std::span<const double> hop) const;
  SpectrumFrame analyze(OverlapState& state, std::span<const float> hop) const;

  // Inverse DFT, synthesis window and overlap-add with the stored tail.
  // Returns the completed hop, which lags the analysis input by one hop.
  Hop synthesize(OverlapState& state, const SpectrumFrame& spectrum) const;

  // Windowed DFT of an arbitrary window-length block.
  SpectrumFrame transform(std::span<const double> frame) const;

 private:
  std::array<double, kWindowSize> window_{};
  RealFft fft_;
};

}  // namespace rnnd

#endif  // RNND_FRAMES_H_
