#ifndef RNND_PITCH_H_
#define RNND_PITCH_H_

#include <array>
#include <cstddef>
#include <span>

#include "rnnd/bands.h"
#include "rnnd/config.h"
#include "rnnd/frames.h"

namespace rnnd {

// Input history for the pitch search: the last max_period + N samples at
// 48 kHz (plus decimation-filter memory) and a 12 kHz copy of the same span.
class PitchState {
 public:
  static constexpr std::size_t kFilterTaps = 33;
  static constexpr std::size_t kHistorySize =
      kMaxPitchPeriod + kWindowSize + kFilterTaps - 1;
  static constexpr std::size_t kDecimatedSize =
      (kMaxPitchPeriod + kWindowSize) / kPitchDecimation;

  void push(std::span<const double> hop);
  void reset() { *this = PitchState{}; }

  std::span<const double> history() const { return history_; }
  std::span<const double> decimated() const { return decimated_; }

  // The N samples of the current analysis window, optionally delayed by
  // `lag` samples (0 <= lag <= kHistorySize - N).
  std::span<const double> window(std::size_t lag = 0) const;

  int current_period() const { return period_; }
  void set_current_period(int period) { period_ = period; }

 private:
  std::array<double, kHistorySize> history_{};
  std::array<double, kDecimatedSize> decimated_{};
  int period_ = kMinPitchPeriod;
};

// Normalized correlation at a 48 kHz lag over the current window:
// sum x(n) x(n-T) / sqrt(sum x(n)^2 * sum x(n-T)^2), 0 when either is silent.
double pitch_correlation(const PitchState& state, int lag);

// Coarse normalized-correlation search on the 12 kHz copy over lags
// 15..192, then an exhaustive 48 kHz search within +-4 samples of each
// of the strongest coarse peaks. Ties go to the smallest lag. Stores and
// returns a period in [60, 768].
int find_pitch(PitchState& state);

// Windowed DFT of x(n - T) at the current window position.
SpectrumFrame pitch_spectrum(const FrameTransform& transform,
                             const PitchState& state, int period);

// Per-band normalized correlation between X and P, clamped to [-1, 1].
// Bands where either energy is below 1e-15 report 0.
BandVector band_pitch_correlation(const SpectrumFrame& x,
                                  const SpectrumFrame& p,
                                  const BandLayout& layout);

// Comb strength for one band:
//   alpha = min(sqrt(p^2 (1 - g^2) / ((1 - p^2) g^2)), 1)
// with g >= 1 -> 0 taking precedence over p >= g -> 1, and p <= 0 -> 0.
double filter_strength(double correlation, double gain);

struct CombFilterPlan {
  BandVector alpha{};
  SpectrumFrame pitch_spectrum;
};

CombFilterPlan plan_comb_filter(const BandVector& correlation,
                                const BandVector& gains,
                                const SpectrumFrame& pitch_spectrum);

// Y(k) = X(k) + alpha(k) P(k), with alpha(k) interpolated from the band
// strengths like the gains, then rescaled so every band's energy matches
// `target_energies`. The rescale applies s^2(k) = sum_b w_b(k) sigma_b per
// bin; the sigma_b solve a tridiagonal system exactly, with an iterative
// scaling fallback when that solve needs a negative sigma. Bands with no
// energy after the sum keep sigma = 1.
SpectrumFrame apply_comb_filter(const SpectrumFrame& x,
                                const CombFilterPlan& plan,
                                const BandLayout& layout,
                                const BandVector& target_energies);

}  // namespace rnnd

#endif  // RNND_PITCH_H_
