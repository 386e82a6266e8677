#include "rnnd/denoiser.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace rnnd {
namespace {

class StageClock {
 public:
  explicit StageClock(bool enabled) : enabled_(enabled) {
    if (enabled_) last_ = Clock::now();
  }
  void charge(double& bucket) {
    if (!enabled_) return;
    const auto now = Clock::now();
    bucket += std::chrono::duration<double>(now - last_).count();
    last_ = now;
  }

 private:
  using Clock = std::chrono::steady_clock;
  bool enabled_;
  Clock::time_point last_;
};

}  // namespace

BandVector smooth_gains(const BandVector& previous, const BandVector& current,
                        double decay) {
  BandVector out{};
  for (std::size_t b = 0; b < kBandCount; ++b) {
    out[b] = std::max(decay * previous[b], current[b]);
  }
  return out;
}

Denoiser::Denoiser(std::shared_ptr<const nn::Model> model,
                   DenoiserOptions options)
    : model_(std::move(model)),
      options_(options),
      layout_(BandLayout::build({}, options.extend_last_band)) {
  if (model_) {
    if (model_->band_edges != layout_.edges()) {
      throw std::invalid_argument(
          "model band table does not match the denoiser band layout");
    }
    network_state_ = std::make_unique<nn::NetworkState>(*model_);
  }
}

void Denoiser::reset() {
  overlap_.reset();
  pitch_.reset();
  feature_history_.reset();
  if (network_state_) network_state_->reset();
  previous_gains_ = {};
  times_ = {};
  frames_ = 0;
}

std::uint64_t Denoiser::network_multiply_adds() const {
  return network_state_ ? network_state_->multiply_adds : 0;
}

FrameResult Denoiser::process_frame(std::span<const float> hop) {
  if (!model_) throw std::logic_error("process_frame requires a model");
  return run(hop, nullptr);
}

FrameResult Denoiser::process_frame_oracle(std::span<const float> hop,
                                           const BandVector& gains) {
  for (double g : gains) {
    if (!(g >= 0.0 && g <= 1.0)) {
      throw std::invalid_argument("oracle gains must lie in [0, 1]");
    }
  }
  return run(hop, &gains);
}

FrameResult Denoiser::run(std::span<const float> hop, const BandVector* oracle) {
  if (hop.size() != kHopSize) {
    throw std::invalid_argument("denoiser expects exactly 480 samples per call");
  }
  if (!std::all_of(hop.begin(), hop.end(), [](float v) { return std::isfinite(v); })) {
    throw std::invalid_argument("denoiser input contains NaN or Inf");
  }
  StageClock clock(options_.profile);
  FrameResult result;

  Hop input;
  std::copy(hop.begin(), hop.end(), input.begin());
  const SpectrumFrame x = transform_.analyze(overlap_, input);
  clock.charge(times_.fft);

  pitch_.push(input);
  const int period = find_pitch(pitch_);
  clock.charge(times_.pitch);
  const SpectrumFrame p = pitch_spectrum(transform_, pitch_, period);
  clock.charge(times_.fft);

  const BandVector energies = band_energies(layout_, x);
  clock.charge(times_.features);
  const BandVector corr = band_pitch_correlation(x, p, layout_);
  clock.charge(times_.pitch);
  result.features = extract_features(feature_history_, energies, corr, period);
  result.pitch_period = period;
  clock.charge(times_.features);

  BandVector gains{};
  if (oracle) {
    gains = *oracle;
  } else {
    std::array<float, kFeatureCount> input_features;
    std::copy(result.features.values.begin(), result.features.values.end(),
              input_features.begin());
    const nn::NetworkOutput net =
        nn::network_forward(*model_, *network_state_, input_features);
    std::copy(net.gains.begin(), net.gains.end(), gains.begin());
    result.vad = net.vad;
  }
  clock.charge(times_.network);

  if (options_.gain_smoothing) gains = smooth_gains(previous_gains_, gains);
  previous_gains_ = gains;
  result.gains_applied = gains;
  clock.charge(times_.other);

  SpectrumFrame y = x;
  if (options_.comb_filter) {
    y = apply_comb_filter(x, plan_comb_filter(corr, gains, p), layout_, energies);
  }
  clock.charge(times_.pitch);

  const auto r = interpolate_gains(layout_, gains);
  for (std::size_t k = 0; k < kSpectrumBins; ++k) y[k] *= r[k];
  clock.charge(times_.other);

  const Hop out = transform_.synthesize(overlap_, y);
  std::transform(out.begin(), out.end(), result.audio.begin(),
                 [](double v) { return static_cast<float>(v); });
  clock.charge(times_.fft);

  ++frames_;
  return result;
}

}  // namespace rnnd
