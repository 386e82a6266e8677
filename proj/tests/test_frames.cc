#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "catch_amalgamated.hpp"
#include "oracles.h"
#include "rnnd/fft.h"
#include "rnnd/frames.h"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

std::vector<double> random_signal(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 0.3);
  std::vector<double> x(n);
  for (double& v : x) v = g(rng);
  return x;
}

}  // namespace

TEST_CASE("complex fft matches direct dft for mixed radices", "[fft]") {
  for (std::size_t n : {1u, 2u, 3u, 4u, 5u, 7u, 8u, 12u, 30u, 49u, 60u, 97u, 480u}) {
    std::mt19937_64 rng(n);
    std::normal_distribution<double> g;
    std::vector<std::complex<double>> x(n);
    for (auto& v : x) v = {g(rng), g(rng)};
    rnnd::ComplexFft fft(n);
    std::vector<std::complex<double>> out(n), back(n);
    fft.forward(x, out);
    const auto expected = oracle::dft(x);
    for (std::size_t k = 0; k < n; ++k) {
      CHECK(std::abs(out[k] - expected[k]) < 1e-9 * (1.0 + std::sqrt(double(n))));
    }
    fft.inverse(out, back);
    for (std::size_t k = 0; k < n; ++k) {
      CHECK(std::abs(back[k] / double(n) - x[k]) < 1e-12 * n + 1e-12);
    }
  }
}

TEST_CASE("real fft matches direct dft at 960 points", "[fft]") {
  const auto x = random_signal(960, 3);
  rnnd::RealFft fft(960);
  std::vector<std::complex<double>> out(fft.bins());
  fft.forward(x, out);
  const auto expected = oracle::real_dft(x);
  for (std::size_t k = 0; k < out.size(); ++k) {
    CHECK(std::abs(out[k] - expected[k]) < 1e-9);
  }
  std::vector<double> back(960);
  fft.inverse(out, back);
  for (std::size_t i = 0; i < 960; ++i) CHECK_THAT(back[i], WithinAbs(x[i], 1e-12));
}

TEST_CASE("vorbis window values", "[frames]") {
  CHECK(rnnd::vorbis_window(0, 960) == 0.0);
  CHECK_THAT(rnnd::vorbis_window(480, 960), WithinAbs(1.0, 1e-15));
  CHECK_THAT(rnnd::vorbis_window(240, 960), WithinAbs(0.7071068, 5e-8));
  for (std::size_t n = 0; n < 960; ++n) {
    CHECK_THAT(rnnd::vorbis_window(n, 960), WithinAbs(oracle::vorbis(n, 960), 1e-15));
  }
}

TEST_CASE("window satisfies the power-complementary condition", "[frames][property]") {
  rnnd::FrameTransform t;
  const auto w = t.window();
  double worst = 0.0;
  for (std::size_t n = 0; n < 480; ++n) {
    worst = std::max(worst, std::abs(w[n] * w[n] + w[n + 480] * w[n + 480] - 1.0));
  }
  CHECK(worst < 1e-6);
  CHECK(worst < 1e-14);
}

TEST_CASE("analysis of silence is an all-zero spectrum", "[frames]") {
  rnnd::FrameTransform t;
  rnnd::OverlapState s;
  const rnnd::Hop zeros{};
  const auto x = t.analyze(s, zeros);
  for (const auto& v : x.bins) CHECK(v == std::complex<double>{});
}

TEST_CASE("steady DC input puts the window sum in bin 0", "[frames]") {
  rnnd::FrameTransform t;
  rnnd::OverlapState s;
  rnnd::Hop ones;
  ones.fill(1.0);
  t.analyze(s, ones);
  const auto x = t.analyze(s, ones);
  double sum = 0.0;
  for (std::size_t n = 0; n < 960; ++n) sum += oracle::vorbis(n, 960);
  CHECK_THAT(x[0].real(), WithinRel(sum, 1e-12));
  std::vector<double> windowed(960);
  for (std::size_t n = 0; n < 960; ++n) windowed[n] = oracle::vorbis(n, 960);
  const auto leak = oracle::real_dft(windowed);
  for (std::size_t k = 1; k < 481; ++k) {
    CHECK(std::abs(std::abs(x[k]) - std::abs(leak[k])) < 1e-9);
  }
}

TEST_CASE("sinusoid on a bin concentrates energy in the main lobe", "[frames]") {
  rnnd::FrameTransform t;
  std::vector<double> frame(960);
  const int bin = 50;
  for (std::size_t n = 0; n < 960; ++n) frame[n] = std::cos(2 * oracle::kPi * bin * n / 960.0);
  const auto x = t.transform(frame);
  double total = 0.0, lobe = 0.0;
  for (std::size_t k = 0; k < 481; ++k) {
    const double e = std::norm(x[k]);
    total += e;
    if (k + 2 >= bin && k <= bin + 2) lobe += e;
  }
  CHECK(lobe / total > 0.999);

  std::vector<double> windowed(960);
  for (std::size_t n = 0; n < 960; ++n) windowed[n] = frame[n] * oracle::vorbis(n, 960);
  const auto expected = oracle::real_dft(windowed);
  for (std::size_t k = 0; k < 481; ++k) CHECK(std::abs(x[k] - expected[k]) < 1e-9);
}

TEST_CASE("parseval holds for the windowed frame", "[frames][property]") {
  rnnd::FrameTransform t;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto frame = random_signal(960, seed);
    const auto x = t.transform(frame);
    double time = 0.0;
    for (std::size_t n = 0; n < 960; ++n) {
      const double v = frame[n] * oracle::vorbis(n, 960);
      time += v * v;
    }
    double freq = std::norm(x[0]) + std::norm(x[480]);
    for (std::size_t k = 1; k < 480; ++k) freq += 2.0 * std::norm(x[k]);
    CHECK_THAT(freq / 960.0, WithinRel(time, 1e-9));
  }
}

TEST_CASE("analysis then synthesis reconstructs with one hop of delay", "[frames][property]") {
  rnnd::FrameTransform t;
  rnnd::OverlapState s;
  const auto x = random_signal(480 * 40, 11);
  std::vector<double> y;
  for (std::size_t h = 0; h < 40; ++h) {
    rnnd::Hop hop;
    std::copy_n(x.begin() + h * 480, 480, hop.begin());
    const auto out = t.synthesize(s, t.analyze(s, hop));
    y.insert(y.end(), out.begin(), out.end());
  }
  double err = 0.0, ref = 0.0;
  for (std::size_t n = 480; n < y.size(); ++n) {
    const double d = y[n] - x[n - 480];
    err += d * d;
    ref += x[n - 480] * x[n - 480];
  }
  CHECK(std::sqrt(err / ref) < 1e-6);
  CHECK(10 * std::log10(err / ref) < -60.0);
  for (std::size_t n = 0; n < 480; ++n) CHECK(std::abs(y[n]) < 1e-12);  // pure delay
}

TEST_CASE("zero spectrum flushes the stored tail then silence", "[frames]") {
  rnnd::FrameTransform t;
  rnnd::OverlapState s;
  const auto x = random_signal(480, 5);
  rnnd::Hop hop;
  std::copy(x.begin(), x.end(), hop.begin());
  const auto spec = t.analyze(s, hop);
  t.synthesize(s, spec);
  const auto tail = s.synthesis_overlap;
  const rnnd::SpectrumFrame zero{};
  const auto first = t.synthesize(s, zero);
  for (std::size_t n = 0; n < 480; ++n) CHECK(first[n] == tail[n]);
  const auto second = t.synthesize(s, zero);
  for (double v : second) CHECK(v == 0.0);
}

TEST_CASE("unit spectrum synthesizes the windowed impulse", "[frames]") {
  rnnd::FrameTransform t;
  rnnd::OverlapState s;
  rnnd::SpectrumFrame ones;
  for (auto& v : ones.bins) v = 1.0;
  const auto head = t.synthesize(s, ones);
  const auto tail = s.synthesis_overlap;
  // IDFT of all-ones is a unit impulse at n = 0; the window is zero there.
  std::vector<std::complex<double>> full(960, 1.0);
  const auto impulse = oracle::dft(full, +1);
  for (std::size_t n = 0; n < 480; ++n) {
    CHECK_THAT(head[n], WithinAbs(impulse[n].real() / 960.0 * oracle::vorbis(n, 960), 1e-12));
    CHECK_THAT(tail[n],
               WithinAbs(impulse[n + 480].real() / 960.0 * oracle::vorbis(n + 480, 960), 1e-12));
  }
  // Parseval on the unwindowed IDFT: sum |x|^2 = (1/N) sum |X|^2 = 1.
  double e = 0.0;
  for (const auto& v : impulse) e += std::norm(v / 960.0);
  CHECK_THAT(e, WithinRel(1.0, 1e-9));
}

TEST_CASE("analyze rejects a wrong hop size", "[frames]") {
  rnnd::FrameTransform t;
  rnnd::OverlapState s;
  std::vector<double> short_hop(479);
  CHECK_THROWS_AS(t.analyze(s, std::span<const double>(short_hop)), std::invalid_argument);
}
