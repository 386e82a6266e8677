#ifndef RNND_BANDS_H_
#define RNND_BANDS_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>

#include "rnnd/config.h"
#include "rnnd/frames.h"

namespace rnnd {

using BandVector = BandArray<double>;

// Triangular bands on an Opus-style Bark approximation. Band b peaks (weight
// 1) at edges[b] and falls linearly to 0 at its neighbours' peaks, so the
// weights of any covered bin sum to 1. The final entry, edges[22], closes the
// covered range: with `extend_last_band` the last band is held flat from
// 20 kHz up to Nyquist, otherwise bins above 20 kHz carry no weight.
class BandLayout {
 public:
  using EdgeTable = std::array<std::uint16_t, kBandEdgeCount>;

  static BandLayout build(const FrameConfig& config = {},
                          bool extend_last_band = true);
  // Rebuilds a layout from a serialized edge table (e.g. a model header).
  // Throws std::invalid_argument if the table is not strictly increasing
  // or does not fit the spectrum.
  static BandLayout from_edges(const EdgeTable& edges);

  static constexpr std::size_t band_count() { return kBandCount; }
  const EdgeTable& edges() const { return edges_; }

  // Bins [0, covered_end) carry weight.
  std::size_t covered_end() const { return std::size_t{edges_.back()} + 1; }

  double weight(std::size_t band, std::size_t bin) const;

  // Each covered bin is split between a lower band and the next one up; the
  // upper band receives `upper_fraction(bin)`.
  std::size_t lower_band(std::size_t bin) const { return lower_band_[bin]; }
  double upper_fraction(std::size_t bin) const { return upper_fraction_[bin]; }

  bool operator==(const BandLayout& other) const {
    return edges_ == other.edges_;
  }

 private:
  BandLayout() = default;

  EdgeTable edges_{};
  std::array<std::uint8_t, kSpectrumBins> lower_band_{};
  std::array<double, kSpectrumBins> upper_fraction_{};
};

// Band energies E(b) = sum_k w_b(k) |X(k)|^2.
BandVector band_energies(const BandLayout& layout, const SpectrumFrame& x);

// Accumulates per-bin values into bands with the triangular weights.
BandVector accumulate_bands(const BandLayout& layout,
                            std::span<const double> per_bin);

// r(k) = sum_b w_b(k) g_b. Bins outside the covered range get 0.
std::array<double, kSpectrumBins> interpolate_gains(const BandLayout& layout,
                                                    const BandVector& gains);

// Bands where both clean and noisy energies fall below this are undefined.
inline constexpr double kSilentBandEnergy = 1e-2;

struct IdealGains {
  BandVector gains{};
  std::array<bool, kBandCount> defined{};
};

// g_b = sqrt(E_s(b) / E_x(b)) clamped to [0, 1]. A band with E_x = 0 gets
// gain 1 (nothing to attenuate).
IdealGains ideal_gains(const BandVector& clean, const BandVector& noisy,
                       double silence_threshold = kSilentBandEnergy);

}  // namespace rnnd

#endif  // RNND_BANDS_H_
