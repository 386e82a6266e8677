#ifndef RNND_BENCHMARK_H_
#define RNND_BENCHMARK_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>

#include "rnnd/denoiser.h"
#include "rnnd/nn/model.h"

namespace rnnd {

struct BenchmarkConfig {
  double seconds = 60.0;
  unsigned threads = 1;  // independent streams, one per thread
  std::uint64_t seed = 1;
};

struct BenchmarkReport {
  double audio_seconds = 0.0;     // per stream
  double wall_seconds = 0.0;      // whole run
  double process_seconds = 0.0;   // mean per-stream processing time
  std::uint64_t frames = 0;       // per stream
  double frames_per_second = 0.0;
  double real_time_factor = 0.0;  // process_seconds / audio_seconds
  StageTimes stages;              // stream 0, seconds
  double multiply_adds_per_frame = 0.0;
  std::size_t model_weights = 0;
  unsigned threads = 1;
  bool streams_identical = true;
  std::string isa;
};

// Denoises synthetic speech in noise with the given model and reports
// throughput and per-stage cost.
BenchmarkReport run_benchmark(std::shared_ptr<const nn::Model> model,
                              const BenchmarkConfig& config = {});

std::string format_report(const BenchmarkReport& report);

}  // namespace rnnd

#endif  // RNND_BENCHMARK_H_
