#ifndef RNND_CONFIG_H_
#define RNND_CONFIG_H_

#include <array>
#include <cstddef>

namespace rnnd {

// Fixed processing geometry. The engine runs at 48 kHz with 20 ms windows and
// a 10 ms hop; other rates are resampled before they reach the engine.
inline constexpr int kSampleRate = 48000;
inline constexpr std::size_t kWindowSize = 960;
inline constexpr std::size_t kHopSize = kWindowSize / 2;
inline constexpr std::size_t kSpectrumBins = kWindowSize / 2 + 1;

inline constexpr std::size_t kBandCount = 22;
inline constexpr std::size_t kBandEdgeCount = kBandCount + 1;

inline constexpr int kMinPitchPeriod = 60;
inline constexpr int kMaxPitchPeriod = 768;
inline constexpr int kPitchDecimation = 4;

inline constexpr std::size_t kDerivativeCoeffs = 6;
inline constexpr std::size_t kPitchCorrCoeffs = 6;
inline constexpr std::size_t kFeatureCount =
    kBandCount + 2 * kDerivativeCoeffs + kPitchCorrCoeffs + 2;
static_assert(kFeatureCount == 42);

// Decay bound for the per-band gain smoother (about 135 ms reverberation).
inline constexpr double kGainDecay = 0.6;

// Versioned behaviours shared with the model exporter. Bump kFeatureVersion
// whenever anything that changes the 42 input features is modified.
inline constexpr unsigned kModelFormatVersion = 1;
inline constexpr unsigned kFeatureVersion = 1;

template <typename T>
using BandArray = std::array<T, kBandCount>;

/// Sample-count view of the frame geometry.
struct FrameConfig {
  int sample_rate = kSampleRate;
  std::size_t window_size = kWindowSize;
  std::size_t hop = kHopSize;

  std::size_t spectrum_bins() const { return window_size / 2 + 1; }
  bool is_supported() const {
    return sample_rate == kSampleRate && window_size == kWindowSize &&
           hop == kHopSize;
  }
};

}  // namespace rnnd

#endif  // RNND_CONFIG_H_
