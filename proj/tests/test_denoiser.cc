#include <cmath>
#include <random>
#include <thread>
#include <vector>

#include "catch_amalgamated.hpp"
#include "rnnd/denoiser.h"
#include "rnnd/signals.h"
#include "rnnd/stream.h"

using Catch::Matchers::WithinAbs;

namespace {

std::shared_ptr<const rnnd::nn::Model> random_model(std::uint64_t seed = 7) {
  return std::make_shared<const rnnd::nn::Model>(
      rnnd::nn::quantize_model(rnnd::nn::FloatModel::random(seed)));
}

rnnd::BandVector filled(double v) {
  rnnd::BandVector g;
  g.fill(v);
  return g;
}

std::vector<float> noisy_speech(double seconds, std::uint64_t seed, double snr = 10.0) {
  const auto clean = rnnd::signals::synthetic_speech(seconds, seed);
  const auto noise = rnnd::signals::white_noise(clean.size(), 1.0, seed + 100);
  return rnnd::signals::mix_at_snr(clean, noise, snr);
}

// Direct per-hop processing, output still delayed by one hop.
std::vector<float> run_hops(rnnd::Denoiser& d, const std::vector<float>& x,
                            const rnnd::BandVector* gains = nullptr) {
  std::vector<float> out;
  for (std::size_t pos = 0; pos + 480 <= x.size(); pos += 480) {
    const auto hop = std::span(x).subspan(pos, 480);
    const auto r = gains ? d.process_frame_oracle(hop, *gains) : d.process_frame(hop);
    out.insert(out.end(), r.audio.begin(), r.audio.end());
  }
  return out;
}

}  // namespace

TEST_CASE("gain smoothing", "[denoiser]") {
  auto g = rnnd::smooth_gains(filled(1.0), filled(0.1));
  for (double v : g) CHECK_THAT(v, WithinAbs(0.6, 1e-15));
  g = rnnd::smooth_gains(filled(0.5), filled(0.8));
  for (double v : g) CHECK(v == 0.8);
  g = rnnd::smooth_gains(filled(0.5), filled(0.3));
  for (double v : g) CHECK(v == 0.3);

  // Through the pipeline: unit gain, then zeros.
  rnnd::Denoiser d;
  const std::vector<float> hop(480, 0.01f);
  d.process_frame_oracle(hop, filled(1.0));
  for (int k = 1; k <= 10; ++k) {
    const auto r = d.process_frame_oracle(hop, filled(0.0));
    for (double v : r.gains_applied) CHECK_THAT(v, WithinAbs(std::pow(0.6, k), 1e-12));
  }
}

TEST_CASE("gains never decay faster than the smoothing bound", "[denoiser][property]") {
  rnnd::Denoiser d;
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto x = noisy_speech(2.0, 3);
  rnnd::BandVector prev{};
  for (std::size_t pos = 0; pos + 480 <= x.size(); pos += 480) {
    rnnd::BandVector g;
    for (double& v : g) v = u(rng) * u(rng);
    const auto r = d.process_frame_oracle(std::span(x).subspan(pos, 480), g);
    for (int b = 0; b < 22; ++b) {
      REQUIRE(r.gains_applied[b] >= 0.6 * prev[b]);
      REQUIRE(r.gains_applied[b] >= g[b]);
      REQUIRE(r.gains_applied[b] <= 1.0);
    }
    prev = r.gains_applied;
  }
}

TEST_CASE("pass-through reconstructs the input one hop late", "[denoiser]") {
  rnnd::Denoiser d(nullptr, rnnd::options_for(rnnd::ProcessingMode::kPassthrough));
  const auto x = rnnd::signals::white_noise(480 * 200, 0.2, 4);
  const auto ones = filled(1.0);
  const auto y = run_hops(d, x, &ones);
  double err = 0.0, ref = 0.0;
  for (std::size_t n = 480; n < y.size(); ++n) {
    const double e = double{y[n]} - x[n - 480];
    err += e * e;
    ref += double{x[n - 480]} * x[n - 480];
  }
  CHECK(std::sqrt(err / ref) < 1e-6);

  // Cross-correlation peaks at exactly one hop.
  int best = -1;
  double best_value = -1.0;
  for (int lag = 0; lag <= 1500; ++lag) {
    double c = 0.0;
    for (std::size_t n = lag; n < y.size(); ++n) c += double{y[n]} * x[n - lag];
    if (c > best_value) {
      best_value = c;
      best = lag;
    }
  }
  CHECK(best == 480);
}

TEST_CASE("aligned stream removes the delay and keeps the length", "[denoiser]") {
  for (std::size_t length : {0u, 1u, 479u, 480u, 481u, 4800u, 12345u}) {
    rnnd::Denoiser d(nullptr, rnnd::options_for(rnnd::ProcessingMode::kPassthrough));
    const auto x = rnnd::signals::white_noise(length, 0.2, length + 1);
    const auto r = rnnd::process_signal(d, x, rnnd::ProcessingMode::kPassthrough);
    REQUIRE(r.audio.size() == length);
    CHECK(r.vad.size() == (length + 479) / 480);
    for (std::size_t n = 0; n < length; ++n) REQUIRE_THAT(r.audio[n], WithinAbs(x[n], 1e-6));
  }
}

TEST_CASE("streaming in arbitrary chunks is bit-identical", "[denoiser][property]") {
  const auto model = random_model();
  const auto x = noisy_speech(1.5, 5);
  rnnd::Denoiser whole(model);
  const auto reference = rnnd::process_signal(whole, x, rnnd::ProcessingMode::kDenoise);

  rnnd::Denoiser chunked(model);
  rnnd::AlignedStream stream(chunked, rnnd::ProcessingMode::kDenoise);
  std::vector<float> out;
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<std::size_t> size(0, 2000);
  for (std::size_t pos = 0; pos < x.size();) {
    const std::size_t n = std::min(size(rng), x.size() - pos);
    stream.write(std::span(x).subspan(pos, n), out);
    pos += n;
  }
  stream.finish(out);
  CHECK(out == reference.audio);
  CHECK(stream.vad() == reference.vad);

  // And equal to calling the frame API directly.
  rnnd::Denoiser direct(model);
  const auto hops = run_hops(direct, x);
  for (std::size_t n = 480; n < hops.size(); ++n) REQUIRE(hops[n] == reference.audio[n - 480]);
}

TEST_CASE("reset restores the initial state", "[denoiser]") {
  const auto model = random_model();
  const auto x = noisy_speech(0.5, 8);
  rnnd::Denoiser d(model);
  const auto first = run_hops(d, x);
  d.reset();
  CHECK(run_hops(d, x) == first);
}

TEST_CASE("streams are independent across threads", "[denoiser]") {
  const auto model = random_model();
  const auto a = noisy_speech(1.0, 9);
  const auto b = noisy_speech(1.0, 10);
  rnnd::Denoiser da(model), db(model);
  const auto ra = run_hops(da, a);
  const auto rb = run_hops(db, b);
  std::vector<float> ta, tb;
  std::thread t1([&] {
    rnnd::Denoiser d(model);
    ta = run_hops(d, a);
  });
  std::thread t2([&] {
    rnnd::Denoiser d(model);
    tb = run_hops(d, b);
  });
  t1.join();
  t2.join();
  CHECK(ta == ra);
  CHECK(tb == rb);
}

TEST_CASE("gain application never adds band energy", "[denoiser][property]") {
  const auto layout = rnnd::BandLayout::build();
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    rnnd::SpectrumFrame x;
    for (auto& v : x.bins) v = {g(rng), g(rng)};
    rnnd::BandVector gains;
    for (double& v : gains) v = u(rng);
    const auto r = rnnd::interpolate_gains(layout, gains);
    rnnd::SpectrumFrame y;
    for (std::size_t k = 0; k < 481; ++k) y[k] = x[k] * r[k];
    const auto ex = rnnd::band_energies(layout, x);
    const auto ey = rnnd::band_energies(layout, y);
    for (int b = 0; b < 22; ++b) REQUIRE(ey[b] <= ex[b] * (1 + 1e-6));
  }

  // End to end with fixed gains and the comb filter off.
  rnnd::DenoiserOptions options;
  options.comb_filter = false;
  rnnd::Denoiser d(nullptr, options);
  rnnd::BandVector gains;
  for (double& v : gains) v = u(rng);
  const auto x = noisy_speech(2.0, 12);
  const auto y = rnnd::process_signal(d, x, rnnd::ProcessingMode::kOracle,
                                      [&](std::size_t) { return gains; }).audio;
  rnnd::FrameTransform transform;
  rnnd::OverlapState sx, sy;
  rnnd::BandVector total_x{}, total_y{};
  for (std::size_t pos = 0; pos + 480 <= x.size(); pos += 480) {
    const auto ex = rnnd::band_energies(layout, transform.analyze(sx, std::span(x).subspan(pos, 480)));
    const auto ey = rnnd::band_energies(layout, transform.analyze(sy, std::span(y).subspan(pos, 480)));
    for (int b = 0; b < 22; ++b) {
      total_x[b] += ex[b];
      total_y[b] += ey[b];
    }
  }
  for (int b = 0; b < 22; ++b) CHECK(total_y[b] <= total_x[b] * (1 + 1e-6));
}

TEST_CASE("silence in gives silence out", "[denoiser]") {
  rnnd::Denoiser d(random_model());
  const std::vector<float> zeros(480, 0.f);
  for (int t = 0; t < 50; ++t) {
    const auto r = d.process_frame(zeros);
    for (float v : r.audio) REQUIRE(std::abs(v) <= 1e-4f);  // -80 dBFS
    for (float v : r.features.values) REQUIRE(std::isfinite(v));
  }
}

TEST_CASE("zero gains attenuate by at least 40 dB", "[denoiser]") {
  rnnd::DenoiserOptions options;
  options.gain_smoothing = false;
  rnnd::Denoiser d(nullptr, options);
  const auto x = rnnd::signals::white_noise(480 * 100, 0.3, 13);
  const auto zeros = filled(0.0);
  const auto y = run_hops(d, x, &zeros);
  const double in = rnnd::signals::energy(x);
  const double out = rnnd::signals::energy(std::span(y).subspan(480));
  CHECK((out == 0.0 || 10 * std::log10(in / out) >= 40.0));
}

TEST_CASE("oracle gains improve SNR", "[denoiser]") {
  const auto clean = rnnd::signals::synthetic_speech(4.0, 14);
  const auto noise = rnnd::signals::white_noise(clean.size(), 1.0, 15);
  const auto noisy = rnnd::signals::mix_at_snr(clean, noise, 10.0);

  // Ideal gains from the clean and noisy band energies of each frame.
  const auto layout = rnnd::BandLayout::build();
  rnnd::FrameTransform transform;
  rnnd::OverlapState sc, sn;
  std::vector<rnnd::BandVector> gains;
  for (std::size_t pos = 0; pos < clean.size(); pos += 480) {
    std::array<float, 480> hc{}, hn{};
    for (std::size_t i = 0; i < 480 && pos + i < clean.size(); ++i) {
      hc[i] = clean[pos + i];
      hn[i] = noisy[pos + i];
    }
    gains.push_back(rnnd::ideal_gains(rnnd::band_energies(layout, transform.analyze(sc, hc)),
                                      rnnd::band_energies(layout, transform.analyze(sn, hn)))
                        .gains);
  }
  rnnd::Denoiser d;
  const auto out = rnnd::process_signal(d, noisy, rnnd::ProcessingMode::kOracle,
                                        [&](std::size_t i) { return gains[i]; });
  const double before = rnnd::signals::snr_db(clean, noisy);
  const double after = rnnd::signals::snr_db(clean, out.audio);
  INFO("SNR " << before << " dB -> " << after << " dB");
  CHECK_THAT(before, WithinAbs(10.0, 1e-6));
  CHECK(after - before >= 5.0);
}

TEST_CASE("invalid input is rejected", "[denoiser]") {
  rnnd::Denoiser d(random_model());
  std::vector<float> hop(480, 0.f);
  hop[100] = std::nanf("");
  CHECK_THROWS_AS(d.process_frame(hop), std::invalid_argument);
  hop[100] = INFINITY;
  CHECK_THROWS_AS(d.process_frame(hop), std::invalid_argument);
  CHECK_THROWS_AS(d.process_frame(std::vector<float>(479, 0.f)), std::invalid_argument);

  rnnd::Denoiser no_model;
  CHECK_THROWS_AS(no_model.process_frame(std::vector<float>(480, 0.f)), std::logic_error);
  CHECK_THROWS_AS(no_model.process_frame_oracle(std::vector<float>(480, 0.f), filled(1.5)),
                  std::invalid_argument);
  CHECK_THROWS_AS(no_model.process_frame_oracle(std::vector<float>(480, 0.f), filled(NAN)),
                  std::invalid_argument);

  rnnd::DenoiserOptions narrow;
  narrow.extend_last_band = false;
  CHECK_THROWS_AS(rnnd::Denoiser(random_model(), narrow), std::invalid_argument);
}

TEST_CASE("network statistics", "[denoiser]") {
  const auto model = random_model();
  rnnd::Denoiser d(model);
  const auto x = noisy_speech(0.5, 16);
  run_hops(d, x);
  CHECK(d.frames_processed() == x.size() / 480);
  CHECK(d.network_multiply_adds() == d.frames_processed() * model->matrix_weight_count());
  const double per_frame = double(d.network_multiply_adds()) / d.frames_processed();
  CHECK(std::abs(per_frame - 87503) / 87503 < 0.1);
}
