#include "rnnd/signals.h"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numbers>
#include <random>

namespace rnnd::signals {
namespace {

constexpr double kRate = 48000.0;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Resonance magnitude of a formant at `centre` with bandwidth `width`.
double formant(double f, double centre, double width) {
  const double d = (f - centre) / width;
  return 1.0 / std::sqrt(1.0 + d * d);
}

}  // namespace

std::vector<float> synthetic_speech(double seconds, std::uint64_t seed) {
  const std::size_t total = static_cast<std::size_t>(seconds * kRate);
  std::vector<double> out(total, 0.0);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  std::size_t pos = static_cast<std::size_t>(0.05 * kRate);
  while (pos < total) {
    const std::size_t length =
        static_cast<std::size_t>((0.15 + 0.2 * uniform(rng)) * kRate);
    const std::size_t end = std::min(total, pos + length);
    const double f0_start = 90.0 + 170.0 * uniform(rng);
    const double f0_end = std::clamp(f0_start * (0.8 + 0.4 * uniform(rng)), 90.0, 260.0);
    const double f1 = 300.0 + 600.0 * uniform(rng);
    const double f2 = 900.0 + 1600.0 * uniform(rng);
    const double f3 = 2500.0 + 1000.0 * uniform(rng);
    const double level = 0.5 + 0.5 * uniform(rng);

    std::vector<double> phase(100);
    for (double& p : phase) p = kTwoPi * uniform(rng);
    const std::size_t n_len = end - pos;
    for (std::size_t i = 0; i < n_len; ++i) {
      const double t = static_cast<double>(i) / static_cast<double>(n_len);
      const double f0 = f0_start + (f0_end - f0_start) * t;
      const double envelope = std::sin(std::numbers::pi * t);
      double v = 0.0;
      for (std::size_t k = 1; k < phase.size(); ++k) {
        const double f = k * f0;
        if (f > 7000.0) break;
        const double amp = (formant(f, f1, 90.0) + 0.7 * formant(f, f2, 120.0) +
                            0.4 * formant(f, f3, 160.0)) /
                           std::sqrt(static_cast<double>(k));
        phase[k] += kTwoPi * f / kRate;
        v += amp * std::sin(phase[k]);
      }
      out[pos + i] += level * envelope * v;
    }
    pos = end;

    // Occasional fricative, then a pause.
    if (uniform(rng) < 0.3 && pos < total) {
      const std::size_t fric = std::min(total - pos, static_cast<std::size_t>(0.06 * kRate));
      double prev = 0.0;
      for (std::size_t i = 0; i < fric; ++i) {
        const double w = gauss(rng);
        const double envelope = std::sin(std::numbers::pi * i / static_cast<double>(fric));
        out[pos + i] += 0.15 * envelope * (w - prev);  // first difference: high-pass
        prev = w;
      }
      pos += fric;
    }
    pos += static_cast<std::size_t>((0.05 + 0.25 * uniform(rng)) * kRate);
  }

  double peak = 0.0;
  for (double v : out) peak = std::max(peak, std::abs(v));
  const double scale = peak > 0.0 ? 0.5 / peak : 0.0;
  std::vector<float> result(total);
  std::transform(out.begin(), out.end(), result.begin(),
                 [scale](double v) { return static_cast<float>(v * scale); });
  return result;
}

std::vector<float> white_noise(std::size_t samples, double rms, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, rms);
  std::vector<float> out(samples);
  for (float& v : out) v = static_cast<float>(gauss(rng));
  return out;
}

std::vector<float> harmonic_tone(std::size_t samples, double f0, double peak,
                                 double max_frequency) {
  std::vector<double> acc(samples, 0.0);
  for (int k = 1; k * f0 < max_frequency; ++k) {
    for (std::size_t n = 0; n < samples; ++n) {
      acc[n] += std::sin(kTwoPi * k * f0 * static_cast<double>(n) / kRate);
    }
  }
  double max_abs = 0.0;
  for (double v : acc) max_abs = std::max(max_abs, std::abs(v));
  const double scale = max_abs > 0.0 ? peak / max_abs : 0.0;
  std::vector<float> out(samples);
  for (std::size_t n = 0; n < samples; ++n) out[n] = static_cast<float>(acc[n] * scale);
  return out;
}

double energy(std::span<const float> x) {
  double e = 0.0;
  for (float v : x) e += static_cast<double>(v) * v;
  return e;
}

double snr_db(std::span<const float> reference, std::span<const float> estimate) {
  assert(reference.size() == estimate.size());
  double signal = 0.0, error = 0.0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    const double d = static_cast<double>(reference[i]) - estimate[i];
    signal += static_cast<double>(reference[i]) * reference[i];
    error += d * d;
  }
  return 10.0 * std::log10(signal / error);
}

std::vector<float> mix_at_snr(std::span<const float> clean,
                              std::span<const float> noise, double snr) {
  assert(clean.size() == noise.size());
  const double gain = std::sqrt(energy(clean) / (energy(noise) * std::pow(10.0, snr / 10.0)));
  std::vector<float> out(clean.size());
  for (std::size_t i = 0; i < clean.size(); ++i) {
    out[i] = static_cast<float>(clean[i] + gain * noise[i]);
  }
  return out;
}

}  // namespace rnnd::signals
