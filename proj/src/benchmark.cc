#include "rnnd/benchmark.h"

#include <chrono>
#include <cstdio>
#include <stdexcept>
#include <thread>
#include <vector>

#include "rnnd/signals.h"
#include "rnnd/simd/kernels.h"

namespace rnnd {
namespace {

struct StreamRun {
  double seconds = 0.0;
  StageTimes stages;
  std::uint64_t multiply_adds = 0;
  std::vector<float> output;
};

StreamRun run_stream(const std::shared_ptr<const nn::Model>& model,
                     const std::vector<float>& input, bool keep_output) {
  DenoiserOptions options;
  options.profile = true;
  Denoiser denoiser(model, options);
  StreamRun run;
  if (keep_output) run.output.reserve(input.size());
  const auto start = std::chrono::steady_clock::now();
  for (std::size_t pos = 0; pos + kHopSize <= input.size(); pos += kHopSize) {
    const FrameResult r =
        denoiser.process_frame(std::span(input).subspan(pos, kHopSize));
    if (keep_output) run.output.insert(run.output.end(), r.audio.begin(), r.audio.end());
  }
  run.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  run.stages = denoiser.stage_times();
  run.multiply_adds = denoiser.network_multiply_adds();
  return run;
}

}  // namespace

BenchmarkReport run_benchmark(std::shared_ptr<const nn::Model> model,
                              const BenchmarkConfig& config) {
  if (!model) throw std::invalid_argument("benchmark needs a model");
  if (config.threads == 0) throw std::invalid_argument("benchmark needs at least one thread");
  if (!(config.seconds > 0.0)) throw std::invalid_argument("benchmark duration must be positive");

  const auto clean = signals::synthetic_speech(config.seconds, config.seed);
  const auto noise = signals::white_noise(clean.size(), 1.0, config.seed + 1);
  const auto input = signals::mix_at_snr(clean, noise, 10.0);

  std::vector<StreamRun> runs(config.threads);
  const bool compare = config.threads > 1;
  const auto start = std::chrono::steady_clock::now();
  if (config.threads == 1) {
    runs[0] = run_stream(model, input, false);
  } else {
    std::vector<std::thread> workers;
    for (unsigned t = 0; t < config.threads; ++t) {
      workers.emplace_back([&, t] { runs[t] = run_stream(model, input, compare); });
    }
    for (auto& w : workers) w.join();
  }
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  BenchmarkReport report;
  report.threads = config.threads;
  report.frames = input.size() / kHopSize;
  report.audio_seconds = static_cast<double>(report.frames * kHopSize) / kSampleRate;
  report.wall_seconds = wall;
  for (const auto& r : runs) report.process_seconds += r.seconds;
  report.process_seconds /= config.threads;
  report.frames_per_second = report.frames / report.process_seconds;
  report.real_time_factor = report.process_seconds / report.audio_seconds;
  report.stages = runs[0].stages;
  report.multiply_adds_per_frame =
      static_cast<double>(runs[0].multiply_adds) / static_cast<double>(report.frames);
  report.model_weights = model->weight_count();
  report.isa = std::string(simd::isa_name(simd::active_kernels().isa));
  for (const auto& r : runs) {
    if (r.output != runs[0].output) report.streams_identical = false;
  }
  return report;
}

std::string format_report(const BenchmarkReport& r) {
  const double per_frame = 1e6 / static_cast<double>(r.frames);
  char buf[1024];
  std::snprintf(buf, sizeof(buf),
                "audio            %.1f s (%llu frames) x %u stream(s)\n"
                "kernels          %s\n"
                "processing       %.3f s per stream, %.3f s wall\n"
                "frames/s         %.0f\n"
                "real-time factor %.4f\n"
                "stage us/frame   fft %.1f  pitch %.1f  features %.1f  network %.1f  other %.1f\n"
                "network MACs     %.0f per frame\n"
                "model weights    %zu\n"
                "%s",
                r.audio_seconds, static_cast<unsigned long long>(r.frames), r.threads,
                r.isa.c_str(), r.process_seconds, r.wall_seconds, r.frames_per_second,
                r.real_time_factor, r.stages.fft * per_frame, r.stages.pitch * per_frame,
                r.stages.features * per_frame, r.stages.network * per_frame,
                r.stages.other * per_frame, r.multiply_adds_per_frame, r.model_weights,
                r.threads > 1 ? (r.streams_identical ? "streams          identical\n"
                                                     : "streams          DIFFER\n")
                              : "");
  return buf;
}

}  // namespace rnnd
