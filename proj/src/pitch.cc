#include "rnnd/pitch.h"

#include <algorithm>
#include <bitset>
#include <cassert>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "rnnd/simd/kernels.h"

namespace rnnd {
namespace {

constexpr double kSilentEnergy = 1e-15;
constexpr int kCoarseMinLag = kMinPitchPeriod / kPitchDecimation;
constexpr int kCoarseMaxLag = kMaxPitchPeriod / kPitchDecimation;
constexpr std::size_t kCoarseWindow = kWindowSize / kPitchDecimation;
constexpr std::size_t kCoarseCandidates = 16;
constexpr int kRefineRadius = 4;

// Blackman-windowed sinc low-pass at 5 kHz, unit DC gain.
std::array<double, PitchState::kFilterTaps> make_decimation_filter() {
  constexpr std::size_t taps = PitchState::kFilterTaps;
  constexpr double cutoff = 5000.0 / kSampleRate;
  std::array<double, taps> h{};
  double sum = 0.0;
  for (std::size_t i = 0; i < taps; ++i) {
    const double m = static_cast<double>(i) - 0.5 * (taps - 1);
    const double sinc =
        m == 0.0 ? 2.0 * cutoff
                 : std::sin(2.0 * std::numbers::pi * cutoff * m) /
                       (std::numbers::pi * m);
    const double phase = 2.0 * std::numbers::pi * static_cast<double>(i) /
                         static_cast<double>(taps - 1);
    const double blackman = 0.42 - 0.5 * std::cos(phase) + 0.08 * std::cos(2 * phase);
    h[i] = sinc * blackman;
    sum += h[i];
  }
  for (double& v : h) v /= sum;
  return h;
}

const std::array<double, PitchState::kFilterTaps>& decimation_filter() {
  static const auto filter = make_decimation_filter();
  return filter;
}

double normalized(double cross, double energy_a, double energy_b) {
  const double denom = std::sqrt(energy_a * energy_b);
  if (energy_a < kSilentEnergy || energy_b < kSilentEnergy) return 0.0;
  return cross / denom;
}

}  // namespace

void PitchState::push(std::span<const double> hop) {
  if (hop.size() != kHopSize) {
    throw std::invalid_argument("pitch history expects 480-sample hops");
  }
  std::copy(history_.begin() + kHopSize, history_.end(), history_.begin());
  std::copy(hop.begin(), hop.end(), history_.end() - kHopSize);

  constexpr std::size_t fresh = kHopSize / kPitchDecimation;
  std::copy(decimated_.begin() + fresh, decimated_.end(), decimated_.begin());
  const auto& h = decimation_filter();
  for (std::size_t j = 0; j < fresh; ++j) {
    const std::size_t pos =
        kHistorySize - kHopSize + kPitchDecimation * j + kPitchDecimation - 1;
    double acc = 0.0;
    for (std::size_t i = 0; i < kFilterTaps; ++i) acc += h[i] * history_[pos - i];
    decimated_[kDecimatedSize - fresh + j] = acc;
  }
}

std::span<const double> PitchState::window(std::size_t lag) const {
  assert(lag + kWindowSize <= kHistorySize);
  return std::span<const double>(history_).subspan(
      kHistorySize - kWindowSize - lag, kWindowSize);
}

double pitch_correlation(const PitchState& state, int lag) {
  const auto& k = simd::active_kernels();
  const auto cur = state.window(0);
  const auto past = state.window(static_cast<std::size_t>(lag));
  return normalized(k.dot_f64(cur.data(), past.data(), kWindowSize),
                    k.dot_f64(cur.data(), cur.data(), kWindowSize),
                    k.dot_f64(past.data(), past.data(), kWindowSize));
}

int find_pitch(PitchState& state) {
  const auto& k = simd::active_kernels();
  const auto dec = state.decimated();
  const double* cur = dec.data() + dec.size() - kCoarseWindow;
  const double cur_energy = k.dot_f64(cur, cur, kCoarseWindow);

  std::array<double, kCoarseMaxLag + 2> coarse{};
  for (int lag = kCoarseMinLag; lag <= kCoarseMaxLag; ++lag) {
    const double* past = cur - lag;
    coarse[lag] = normalized(k.dot_f64(cur, past, kCoarseWindow), cur_energy,
                             k.dot_f64(past, past, kCoarseWindow));
  }

  std::vector<int> candidates;
  int best_coarse = kCoarseMinLag;
  for (int lag = kCoarseMinLag; lag <= kCoarseMaxLag; ++lag) {
    if (coarse[lag] > coarse[best_coarse]) best_coarse = lag;
    const bool rises = lag == kCoarseMinLag || coarse[lag] > coarse[lag - 1];
    const bool falls = lag == kCoarseMaxLag || coarse[lag] >= coarse[lag + 1];
    if (rises && falls) candidates.push_back(lag);
  }
  if (std::find(candidates.begin(), candidates.end(), best_coarse) ==
      candidates.end()) {
    candidates.push_back(best_coarse);
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [&](int a, int b) { return coarse[a] > coarse[b]; });
  if (candidates.size() > kCoarseCandidates) {
    candidates.resize(kCoarseCandidates);
  }

  std::bitset<kMaxPitchPeriod + 1> visited;
  int best = kMinPitchPeriod;
  double best_corr = -2.0;
  for (int lag : candidates) {
    const int lo = std::max(kMinPitchPeriod, kPitchDecimation * lag - kRefineRadius);
    const int hi = std::min(kMaxPitchPeriod, kPitchDecimation * lag + kRefineRadius);
    for (int t = lo; t <= hi; ++t) {
      if (visited[t]) continue;
      visited[t] = true;
      const double r = pitch_correlation(state, t);
      if (r > best_corr || (r == best_corr && t < best)) {
        best_corr = r;
        best = t;
      }
    }
  }
  state.set_current_period(best);
  return best;
}

SpectrumFrame pitch_spectrum(const FrameTransform& transform,
                             const PitchState& state, int period) {
  assert(period >= 0 &&
         static_cast<std::size_t>(period) + kWindowSize <= PitchState::kHistorySize);
  return transform.transform(state.window(static_cast<std::size_t>(period)));
}

BandVector band_pitch_correlation(const SpectrumFrame& x,
                                  const SpectrumFrame& p,
                                  const BandLayout& layout) {
  const auto& k = simd::active_kernels();
  std::array<double, kSpectrumBins> xx, pp, xp;
  k.power_spectrum(x.bins.data(), xx.data(), kSpectrumBins);
  k.power_spectrum(p.bins.data(), pp.data(), kSpectrumBins);
  k.cross_spectrum(x.bins.data(), p.bins.data(), xp.data(), kSpectrumBins);
  const BandVector ex = accumulate_bands(layout, xx);
  const BandVector ep = accumulate_bands(layout, pp);
  const BandVector exp = accumulate_bands(layout, xp);

  BandVector corr{};
  for (std::size_t b = 0; b < kBandCount; ++b) {
    corr[b] = std::clamp(normalized(exp[b], ex[b], ep[b]), -1.0, 1.0);
  }
  return corr;
}

double filter_strength(double correlation, double gain) {
  if (gain >= 1.0) return 0.0;
  if (correlation <= 0.0) return 0.0;
  if (correlation >= gain) return 1.0;
  const double p2 = correlation * correlation;
  const double g2 = gain * gain;
  return std::min(std::sqrt(p2 * (1.0 - g2) / ((1.0 - p2) * g2)), 1.0);
}

CombFilterPlan plan_comb_filter(const BandVector& correlation,
                                const BandVector& gains,
                                const SpectrumFrame& pitch_spectrum) {
  CombFilterPlan plan;
  for (std::size_t b = 0; b < kBandCount; ++b) {
    plan.alpha[b] = filter_strength(correlation[b], gains[b]);
  }
  plan.pitch_spectrum = pitch_spectrum;
  return plan;
}

namespace {

constexpr int kMaxNewtonIterations = 100;
constexpr int kMaxLineSearchHalvings = 30;
constexpr double kScalingTolerance = 1e-12;
// Ratios of target to filtered energy beyond this are treated as silence.
constexpr double kMaxLogRatio = 300.0;

using Tridiagonal = std::array<BandVector, 3>;  // lower, diagonal, upper

// Solves a tridiagonal system in place of `rhs` (Thomas algorithm).
BandVector solve_tridiagonal(const Tridiagonal& m, BandVector rhs) {
  const auto& [lower, diag, upper] = m;
  BandVector c{};
  c[0] = upper[0] / diag[0];
  rhs[0] /= diag[0];
  for (std::size_t b = 1; b < kBandCount; ++b) {
    const double d = diag[b] - lower[b] * c[b - 1];
    c[b] = upper[b] / d;
    rhs[b] = (rhs[b] - lower[b] * rhs[b - 1]) / d;
  }
  for (std::size_t b = kBandCount - 1; b-- > 0;) rhs[b] -= c[b] * rhs[b + 1];
  return rhs;
}

// Gram matrix M_bc = sum_k w_b(k) w_c(k) v(k) restricted to active bands;
// inactive rows become identity rows.
Tridiagonal band_gram(const BandLayout& layout, std::span<const double> v,
                      const std::array<bool, kBandCount>& active) {
  Tridiagonal m{};
  auto& [lower, diag, upper] = m;
  for (std::size_t k = 0; k < layout.covered_end(); ++k) {
    const std::size_t b = layout.lower_band(k);
    const double f = layout.upper_fraction(k);
    diag[b] += (1.0 - f) * (1.0 - f) * v[k];
    if (f > 0.0) {
      diag[b + 1] += f * f * v[k];
      upper[b] += (1.0 - f) * f * v[k];
      lower[b + 1] += (1.0 - f) * f * v[k];
    }
  }
  for (std::size_t b = 0; b < kBandCount; ++b) {
    if (active[b]) continue;
    diag[b] = 1.0;
    upper[b] = lower[b] = 0.0;
    if (b > 0) upper[b - 1] = 0.0;
    if (b + 1 < kBandCount) lower[b + 1] = 0.0;
  }
  return m;
}

double worst_log_error(const BandVector& energy, const BandVector& target,
                       const std::array<bool, kBandCount>& active) {
  double worst = 0.0;
  for (std::size_t b = 0; b < kBandCount; ++b) {
    if (!active[b]) continue;
    if (!(energy[b] > 0.0)) return std::numeric_limits<double>::infinity();
    worst = std::max(worst, std::abs(std::log(energy[b] / target[b])));
  }
  return worst;
}

double squared_log_error(const BandVector& energy, const BandVector& target,
                         const std::array<bool, kBandCount>& active) {
  double sum = 0.0;
  for (std::size_t b = 0; b < kBandCount; ++b) {
    if (!active[b]) continue;
    if (!(energy[b] > 0.0)) return std::numeric_limits<double>::infinity();
    const double g = std::log(energy[b] / target[b]);
    sum += g * g;
  }
  return sum;
}

// Finds per-bin power scales s2 so that sum_k w_b(k) s2(k) q(k) equals the
// target for every active band; inactive bands keep unit scale.
//
// First try s2 = sum_b w_b sigma_b, which makes the band energies linear in
// sigma (one tridiagonal solve). When that needs a negative sigma, switch to
// s2 = exp(sum_b w_b u_b): the band energies are then the gradient of a
// strictly convex function of u and the unique positive solution is found by
// damped Newton steps on log E_b(u) - log target_b (again tridiagonal).
void solve_band_scales(const BandLayout& layout, std::span<const double> q,
                       const BandVector& target,
                       const std::array<bool, kBandCount>& active,
                       std::span<double> s2) {
  const std::size_t end = layout.covered_end();
  BandVector rhs = target;
  for (std::size_t b = 0; b < kBandCount; ++b) {
    if (!active[b]) rhs[b] = 1.0;
  }
  // Inactive neighbours contribute at unit scale.
  const Tridiagonal full = band_gram(layout, q, std::array<bool, kBandCount>{
      true, true, true, true, true, true, true, true, true, true, true,
      true, true, true, true, true, true, true, true, true, true, true});
  for (std::size_t b = 0; b < kBandCount; ++b) {
    if (!active[b]) continue;
    if (b > 0 && !active[b - 1]) rhs[b] -= full[0][b];
    if (b + 1 < kBandCount && !active[b + 1]) rhs[b] -= full[2][b];
  }
  const BandVector sigma = solve_tridiagonal(band_gram(layout, q, active), rhs);

  std::array<double, kSpectrumBins> scaled{};
  const auto energies_for = [&](std::span<const double> scale) {
    for (std::size_t k = 0; k < end; ++k) scaled[k] = scale[k] * q[k];
    return accumulate_bands(layout, scaled);
  };

  if (std::all_of(sigma.begin(), sigma.end(),
                  [](double v) { return std::isfinite(v) && v >= 0.0; })) {
    const auto interp = interpolate_gains(layout, sigma);
    std::copy_n(interp.begin(), end, s2.begin());
    if (worst_log_error(energies_for(s2), target, active) < kScalingTolerance) return;
  }

  BandVector u{};
  const BandVector start = accumulate_bands(layout, q);
  for (std::size_t b = 0; b < kBandCount; ++b) {
    if (active[b]) u[b] = std::log(target[b] / start[b]);
  }
  std::array<double, kSpectrumBins> trial{};
  const auto scales_for = [&](const BandVector& log_sigma, std::span<double> out) {
    for (std::size_t k = 0; k < end; ++k) {
      const std::size_t b = layout.lower_band(k);
      const double f = layout.upper_fraction(k);
      out[k] = std::exp((1.0 - f) * log_sigma[b] +
                        (f > 0.0 ? f * log_sigma[b + 1] : 0.0));
    }
  };
  scales_for(u, s2);
  BandVector energy = energies_for(s2);
  double error = squared_log_error(energy, target, active);

  for (int iter = 0; iter < kMaxNewtonIterations &&
                     worst_log_error(energy, target, active) >= kScalingTolerance;
       ++iter) {
    for (std::size_t k = 0; k < end; ++k) scaled[k] = s2[k] * q[k];
    const Tridiagonal jacobian = band_gram(layout, scaled, active);
    // Symmetric diagonal scaling keeps bands of very different energy
    // equally well resolved.
    BandVector inv_root{}, residual{};
    Tridiagonal normalized_jacobian = jacobian;
    for (std::size_t b = 0; b < kBandCount; ++b) {
      inv_root[b] = 1.0 / std::sqrt(jacobian[1][b]);
    }
    for (std::size_t b = 0; b < kBandCount; ++b) {
      normalized_jacobian[1][b] = 1.0;
      if (b > 0) normalized_jacobian[0][b] *= inv_root[b] * inv_root[b - 1];
      if (b + 1 < kBandCount) normalized_jacobian[2][b] *= inv_root[b] * inv_root[b + 1];
      residual[b] =
          active[b] ? energy[b] * std::log(target[b] / energy[b]) * inv_root[b] : 0.0;
    }
    BandVector step = solve_tridiagonal(normalized_jacobian, residual);
    for (std::size_t b = 0; b < kBandCount; ++b) step[b] *= inv_root[b];

    double lambda = 1.0;
    bool improved = false;
    for (int h = 0; h < kMaxLineSearchHalvings; ++h, lambda *= 0.5) {
      BandVector candidate = u;
      for (std::size_t b = 0; b < kBandCount; ++b) candidate[b] += lambda * step[b];
      scales_for(candidate, trial);
      const BandVector trial_energy = energies_for(trial);
      const double trial_error = squared_log_error(trial_energy, target, active);
      if (trial_error < error) {
        u = candidate;
        std::copy_n(trial.begin(), end, s2.begin());
        energy = trial_energy;
        error = trial_error;
        improved = true;
        break;
      }
    }
    if (!improved) break;
  }
}

}  // namespace

SpectrumFrame apply_comb_filter(const SpectrumFrame& x,
                                const CombFilterPlan& plan,
                                const BandLayout& layout,
                                const BandVector& target_energies) {
  if (std::all_of(plan.alpha.begin(), plan.alpha.end(),
                  [](double a) { return a == 0.0; })) {
    return x;
  }
  const std::size_t end = layout.covered_end();
  const auto alpha = interpolate_gains(layout, plan.alpha);
  SpectrumFrame y = x;
  for (std::size_t k = 0; k < end; ++k) {
    y[k] += alpha[k] * plan.pitch_spectrum[k];
  }

  // A band whose energy cannot be matched by scaling (silent target, or the
  // pitch term cancelled it) gets its bins back from X. Restoring one band can
  // only change its neighbours' energies by putting X back, so repeat until
  // nothing changes.
  const auto& kernels = simd::active_kernels();
  std::array<double, kSpectrumBins> q;
  std::array<bool, kBandCount> active{};
  std::array<bool, kBandCount> restored{};
  for (bool changed = true; changed;) {
    changed = false;
    kernels.power_spectrum(y.bins.data(), q.data(), kSpectrumBins);
    const BandVector filtered = accumulate_bands(layout, q);
    for (std::size_t b = 0; b < kBandCount; ++b) {
      const double t = target_energies[b];
      const bool scalable = t > 0.0 && filtered[b] > 0.0 &&
                            std::abs(std::log(t / filtered[b])) < kMaxLogRatio;
      active[b] = scalable && !restored[b];
      if (scalable || restored[b]) continue;
      restored[b] = true;
      changed = true;
      for (std::size_t k = 0; k < end; ++k) {
        if (layout.weight(b, k) > 0.0) y[k] = x[k];
      }
    }
  }

  std::array<double, kSpectrumBins> s2;
  s2.fill(1.0);
  solve_band_scales(layout, q, target_energies, active, s2);
  for (std::size_t k = 0; k < end; ++k) y[k] *= std::sqrt(s2[k]);
  return y;
}

}  // namespace rnnd
