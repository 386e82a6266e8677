#include "rnnd/bands.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rnnd/simd/kernels.h"

namespace rnnd {
namespace {

// Band peaks in Hz (Opus-style Bark approximation, at least 200 Hz apart).
constexpr std::array<double, kBandCount> kBandPeaksHz = {
    0,    200,  400,  600,  800,  1000, 1200, 1400,  1600,  2000,  2400,
    2800, 3200, 4000, 4800, 5600, 6800, 8000, 9600, 12000, 15600, 20000};

constexpr std::uint8_t kNoBand = 0xFF;

}  // namespace

BandLayout BandLayout::build(const FrameConfig& config, bool extend_last_band) {
  if (!config.is_supported()) {
    throw std::invalid_argument(
        "band layout: only 48 kHz with 960-sample windows is supported");
  }
  const double hz_per_bin = static_cast<double>(config.sample_rate) /
                            static_cast<double>(config.window_size);
  EdgeTable edges{};
  for (std::size_t b = 0; b < kBandCount; ++b) {
    edges[b] = static_cast<std::uint16_t>(std::lround(kBandPeaksHz[b] / hz_per_bin));
  }
  edges[kBandCount] = extend_last_band
                          ? static_cast<std::uint16_t>(config.window_size / 2)
                          : edges[kBandCount - 1];
  return from_edges(edges);
}

BandLayout BandLayout::from_edges(const EdgeTable& edges) {
  if (edges[0] != 0) throw std::invalid_argument("band edges must start at bin 0");
  for (std::size_t b = 1; b < kBandCount; ++b) {
    if (edges[b] <= edges[b - 1]) {
      throw std::invalid_argument("band edges must be strictly increasing");
    }
  }
  if (edges[kBandCount] < edges[kBandCount - 1] ||
      edges[kBandCount] >= kSpectrumBins) {
    throw std::invalid_argument("band edge table does not fit the spectrum");
  }

  BandLayout layout;
  layout.edges_ = edges;
  layout.lower_band_.fill(kNoBand);
  const std::size_t last_peak = edges[kBandCount - 1];
  for (std::size_t b = 0; b + 1 < kBandCount; ++b) {
    const std::size_t lo = edges[b];
    const std::size_t hi = edges[b + 1];
    for (std::size_t k = lo; k < hi; ++k) {
      layout.lower_band_[k] = static_cast<std::uint8_t>(b);
      layout.upper_fraction_[k] =
          static_cast<double>(k - lo) / static_cast<double>(hi - lo);
    }
  }
  for (std::size_t k = last_peak; k <= edges[kBandCount]; ++k) {
    layout.lower_band_[k] = static_cast<std::uint8_t>(kBandCount - 2);
    layout.upper_fraction_[k] = 1.0;
  }
  return layout;
}

double BandLayout::weight(std::size_t band, std::size_t bin) const {
  const std::size_t lower = lower_band_[bin];
  if (lower == kNoBand) return 0.0;
  if (band == lower) return 1.0 - upper_fraction_[bin];
  if (band == lower + 1) return upper_fraction_[bin];
  return 0.0;
}

BandVector accumulate_bands(const BandLayout& layout,
                            std::span<const double> per_bin) {
  BandVector sum{};
  const std::size_t end = std::min(layout.covered_end(), per_bin.size());
  for (std::size_t k = 0; k < end; ++k) {
    const std::size_t b = layout.lower_band(k);
    const double frac = layout.upper_fraction(k);
    sum[b] += (1.0 - frac) * per_bin[k];
    sum[b + 1] += frac * per_bin[k];
  }
  return sum;
}

BandVector band_energies(const BandLayout& layout, const SpectrumFrame& x) {
  std::array<double, kSpectrumBins> power;
  simd::active_kernels().power_spectrum(x.bins.data(), power.data(),
                                        kSpectrumBins);
  return accumulate_bands(layout, power);
}

std::array<double, kSpectrumBins> interpolate_gains(const BandLayout& layout,
                                                    const BandVector& gains) {
  std::array<double, kSpectrumBins> r{};
  for (std::size_t k = 0; k < layout.covered_end(); ++k) {
    const std::size_t b = layout.lower_band(k);
    const double frac = layout.upper_fraction(k);
    r[k] = (1.0 - frac) * gains[b] + frac * gains[b + 1];
  }
  return r;
}

IdealGains ideal_gains(const BandVector& clean, const BandVector& noisy,
                       double silence_threshold) {
  IdealGains out;
  for (std::size_t b = 0; b < kBandCount; ++b) {
    out.defined[b] =
        !(clean[b] < silence_threshold && noisy[b] < silence_threshold);
    out.gains[b] =
        noisy[b] > 0.0 ? std::clamp(std::sqrt(clean[b] / noisy[b]), 0.0, 1.0)
                       : 1.0;
  }
  return out;
}

}  // namespace rnnd
