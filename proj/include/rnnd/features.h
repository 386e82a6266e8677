#ifndef RNND_FEATURES_H_
#define RNND_FEATURES_H_

#include <array>
#include <cstddef>
#include <span>

#include "rnnd/bands.h"
#include "rnnd/config.h"

namespace rnnd {

// Network input, in this order:
//   [0, 22)  BFCC (orthonormal DCT-II of log10 band energies)
//   [22, 28) first temporal difference of BFCC 0..5
//   [28, 34) second temporal difference of BFCC 0..5
//   [34, 40) DCT-II coefficients 0..5 of the band pitch correlations
//   [40]     pitch period / max period
//   [41]     spectral non-stationarity in [0, 1)
struct FeatureVector {
  static constexpr std::size_t kBfccOffset = 0;
  static constexpr std::size_t kDeltaOffset = kBandCount;
  static constexpr std::size_t kDeltaDeltaOffset = kDeltaOffset + kDerivativeCoeffs;
  static constexpr std::size_t kPitchCorrOffset = kDeltaDeltaOffset + kDerivativeCoeffs;
  static constexpr std::size_t kPeriodIndex = kPitchCorrOffset + kPitchCorrCoeffs;
  static constexpr std::size_t kNonStationarityIndex = kPeriodIndex + 1;

  std::array<double, kFeatureCount> values{};

  std::span<const double> bfcc() const {
    return std::span(values).subspan(kBfccOffset, kBandCount);
  }
  std::span<const double> delta() const {
    return std::span(values).subspan(kDeltaOffset, kDerivativeCoeffs);
  }
  std::span<const double> delta_delta() const {
    return std::span(values).subspan(kDeltaDeltaOffset, kDerivativeCoeffs);
  }
  std::span<const double> pitch_corr_dct() const {
    return std::span(values).subspan(kPitchCorrOffset, kPitchCorrCoeffs);
  }
  double pitch_period() const { return values[kPeriodIndex]; }
  double non_stationarity() const { return values[kNonStationarityIndex]; }
};

// log10 of band energies is clipped below at this value.
inline constexpr double kLogEnergyFloor = -8.0;

struct FeatureHistory {
  BandVector previous_bfcc{};       // c_{t-1}
  BandVector previous_bfcc_2{};     // c_{t-2}
  BandVector previous_log_energy{};

  void reset() { *this = FeatureHistory{}; }
};

// Orthonormal DCT-II of length 22 and its inverse (DCT-III).
BandVector band_dct(const BandVector& x);
BandVector band_idct(const BandVector& c);

BandVector log_band_energies(const BandVector& energies);

BandVector compute_bfcc(const BandVector& energies);

struct TemporalDerivatives {
  std::array<double, kDerivativeCoeffs> delta{};
  std::array<double, kDerivativeCoeffs> delta_delta{};
};

// delta = c_t - c_{t-1}, delta_delta = c_t - 2 c_{t-1} + c_{t-2}.
TemporalDerivatives temporal_derivatives(const FeatureHistory& history,
                                         const BandVector& bfcc);

std::array<double, kPitchCorrCoeffs> pitch_corr_dct(const BandVector& corr);

// d = mean_b (L_t(b) - L_{t-1}(b))^2 over log10 energies, reported as
// d / (1 + d).
double non_stationarity(const FeatureHistory& history,
                        const BandVector& log_energy);

FeatureVector assemble_features(
    std::span<const double> bfcc, std::span<const double> delta,
    std::span<const double> delta_delta, std::span<const double> pitch_dct,
    int pitch_period, double non_stationarity);

// Runs the whole extraction for one frame and advances the history.
FeatureVector extract_features(FeatureHistory& history,
                               const BandVector& energies,
                               const BandVector& pitch_corr, int pitch_period);

}  // namespace rnnd

#endif  // RNND_FEATURES_H_
