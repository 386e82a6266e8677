#ifndef RNND_DENOISER_H_
#define RNND_DENOISER_H_

#include <array>
#include <cstdint>
#include <memory>
#include <span>

#include "rnnd/bands.h"
#include "rnnd/config.h"
#include "rnnd/features.h"
#include "rnnd/frames.h"
#include "rnnd/nn/model.h"
#include "rnnd/nn/network.h"
#include "rnnd/pitch.h"

namespace rnnd {

// g~_b = max(decay * g~_b(prev), g_b): gains may rise instantly but fall by at
// most a factor of `decay` per frame.
BandVector smooth_gains(const BandVector& previous, const BandVector& current,
                        double decay = kGainDecay);

struct DenoiserOptions {
  bool comb_filter = true;
  bool gain_smoothing = true;
  bool extend_last_band = true;
  bool profile = false;  // accumulate per-stage wall time
};

struct StageTimes {
  double fft = 0.0;       // analysis, pitch-delayed transform, synthesis
  double pitch = 0.0;     // pitch search, band correlation, comb filter
  double features = 0.0;  // band energies and feature extraction
  double network = 0.0;
  double other = 0.0;     // gain smoothing and application
};

struct FrameResult {
  std::array<float, kHopSize> audio{};
  float vad = 0.f;
  BandVector gains_applied{};
  int pitch_period = 0;
  FeatureVector features;
};

// One audio stream. Calls must be sequential; distinct instances are
// independent and may run on different threads sharing one Model.
class Denoiser {
 public:
  // `model` may be null for oracle-gain and pass-through use.
  explicit Denoiser(std::shared_ptr<const nn::Model> model = nullptr,
                    DenoiserOptions options = {});

  // One hop in, one hop out, delayed by exactly one hop. Throws
  // std::invalid_argument for a wrong hop size or non-finite samples, and
  // std::logic_error when no model was supplied.
  FrameResult process_frame(std::span<const float> hop);

  // Same pipeline with the network output replaced by `gains` (in [0, 1]).
  FrameResult process_frame_oracle(std::span<const float> hop,
                                   const BandVector& gains);

  void reset();

  const BandLayout& layout() const { return layout_; }
  const DenoiserOptions& options() const { return options_; }
  const StageTimes& stage_times() const { return times_; }
  std::uint64_t frames_processed() const { return frames_; }
  std::uint64_t network_multiply_adds() const;
  const BandVector& smoothed_gains() const { return previous_gains_; }

 private:
  FrameResult run(std::span<const float> hop, const BandVector* oracle);

  std::shared_ptr<const nn::Model> model_;
  DenoiserOptions options_;
  BandLayout layout_;
  FrameTransform transform_;

  OverlapState overlap_;
  PitchState pitch_;
  FeatureHistory feature_history_;
  std::unique_ptr<nn::NetworkState> network_state_;
  BandVector previous_gains_{};

  StageTimes times_;
  std::uint64_t frames_ = 0;
};

}  // namespace rnnd

#endif  // RNND_DENOISER_H_
