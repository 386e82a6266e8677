#include "rnnd/features.h"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numbers>

namespace rnnd {
namespace {

using DctTable = std::array<std::array<double, kBandCount>, kBandCount>;

// table[k][n] = c_k cos(pi (n + 1/2) k / 22), c_0 = sqrt(1/22), else sqrt(2/22)
const DctTable& dct_table() {
  static const DctTable table = [] {
    DctTable t{};
    const double n_bands = static_cast<double>(kBandCount);
    for (std::size_t k = 0; k < kBandCount; ++k) {
      const double scale = std::sqrt((k == 0 ? 1.0 : 2.0) / n_bands);
      for (std::size_t n = 0; n < kBandCount; ++n) {
        t[k][n] = scale * std::cos(std::numbers::pi * (static_cast<double>(n) + 0.5) *
                                   static_cast<double>(k) / n_bands);
      }
    }
    return t;
  }();
  return table;
}

}  // namespace

BandVector band_dct(const BandVector& x) {
  const auto& t = dct_table();
  BandVector c{};
  for (std::size_t k = 0; k < kBandCount; ++k) {
    double acc = 0.0;
    for (std::size_t n = 0; n < kBandCount; ++n) acc += t[k][n] * x[n];
    c[k] = acc;
  }
  return c;
}

BandVector band_idct(const BandVector& c) {
  const auto& t = dct_table();
  BandVector x{};
  for (std::size_t n = 0; n < kBandCount; ++n) {
    double acc = 0.0;
    for (std::size_t k = 0; k < kBandCount; ++k) acc += t[k][n] * c[k];
    x[n] = acc;
  }
  return x;
}

BandVector log_band_energies(const BandVector& energies) {
  BandVector out{};
  for (std::size_t b = 0; b < kBandCount; ++b) {
    out[b] = energies[b] > 0.0
                 ? std::max(std::log10(energies[b]), kLogEnergyFloor)
                 : kLogEnergyFloor;
  }
  return out;
}

BandVector compute_bfcc(const BandVector& energies) {
  return band_dct(log_band_energies(energies));
}

TemporalDerivatives temporal_derivatives(const FeatureHistory& history,
                                         const BandVector& bfcc) {
  TemporalDerivatives d;
  for (std::size_t i = 0; i < kDerivativeCoeffs; ++i) {
    d.delta[i] = bfcc[i] - history.previous_bfcc[i];
    d.delta_delta[i] =
        bfcc[i] - 2.0 * history.previous_bfcc[i] + history.previous_bfcc_2[i];
  }
  return d;
}

std::array<double, kPitchCorrCoeffs> pitch_corr_dct(const BandVector& corr) {
  const BandVector full = band_dct(corr);
  std::array<double, kPitchCorrCoeffs> out{};
  std::copy_n(full.begin(), kPitchCorrCoeffs, out.begin());
  return out;
}

double non_stationarity(const FeatureHistory& history,
                        const BandVector& log_energy) {
  double sum = 0.0;
  for (std::size_t b = 0; b < kBandCount; ++b) {
    const double d = log_energy[b] - history.previous_log_energy[b];
    sum += d * d;
  }
  const double mean = sum / static_cast<double>(kBandCount);
  return mean / (1.0 + mean);
}

FeatureVector assemble_features(std::span<const double> bfcc,
                                std::span<const double> delta,
                                std::span<const double> delta_delta,
                                std::span<const double> pitch_dct,
                                int pitch_period, double non_stat) {
  assert(bfcc.size() == kBandCount);
  assert(delta.size() == kDerivativeCoeffs);
  assert(delta_delta.size() == kDerivativeCoeffs);
  assert(pitch_dct.size() == kPitchCorrCoeffs);
  FeatureVector f;
  auto out = f.values.begin();
  out = std::copy(bfcc.begin(), bfcc.end(), out);
  out = std::copy(delta.begin(), delta.end(), out);
  out = std::copy(delta_delta.begin(), delta_delta.end(), out);
  out = std::copy(pitch_dct.begin(), pitch_dct.end(), out);
  *out++ = static_cast<double>(pitch_period) / kMaxPitchPeriod;
  *out++ = non_stat;
  assert(out == f.values.end());
  return f;
}

FeatureVector extract_features(FeatureHistory& history,
                               const BandVector& energies,
                               const BandVector& pitch_corr, int pitch_period) {
  const BandVector log_energy = log_band_energies(energies);
  const BandVector bfcc = band_dct(log_energy);
  const TemporalDerivatives d = temporal_derivatives(history, bfcc);
  const auto pdct = pitch_corr_dct(pitch_corr);
  const double ns = non_stationarity(history, log_energy);

  history.previous_bfcc_2 = history.previous_bfcc;
  history.previous_bfcc = bfcc;
  history.previous_log_energy = log_energy;

  return assemble_features(bfcc, d.delta, d.delta_delta, pdct, pitch_period, ns);
}

}  // namespace rnnd
