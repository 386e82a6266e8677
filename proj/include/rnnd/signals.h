#ifndef RNND_SIGNALS_H_
#define RNND_SIGNALS_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace rnnd::signals {

// Speech-like test material at 48 kHz: voiced syllables with drifting
// fundamental (90-260 Hz), three formant resonances and a spectral tilt,
// separated by short pauses and occasional fricative noise bursts.
// Peak level is about -6 dBFS.
std::vector<float> synthetic_speech(double seconds, std::uint64_t seed);

std::vector<float> white_noise(std::size_t samples, double rms, std::uint64_t seed);

// sum_k sin(2 pi k f0 n / fs) for k f0 below `max_frequency`, normalized to
// the given peak.
std::vector<float> harmonic_tone(std::size_t samples, double f0, double peak,
                                 double max_frequency = 8000.0);

double energy(std::span<const float> x);
// 10 log10(|s|^2 / |s - y|^2).
double snr_db(std::span<const float> reference, std::span<const float> estimate);
// Scales `noise` so that the clean-to-noise ratio equals `snr` dB and returns
// clean + noise.
std::vector<float> mix_at_snr(std::span<const float> clean,
                              std::span<const float> noise, double snr);

}  // namespace rnnd::signals

#endif  // RNND_SIGNALS_H_
