#include <cmath>
#include <complex>
#include <cstdlib>
#include <random>
#include <vector>

#include "catch_amalgamated.hpp"
#include "rnnd/simd/kernels.h"

namespace {

using rnnd::simd::Isa;
using rnnd::simd::Kernels;

std::vector<const Kernels*> accelerated() {
  std::vector<const Kernels*> out;
  for (Isa isa : {Isa::kAvx2, Isa::kNeon}) {
    if (const Kernels* k = rnnd::simd::kernels_for(isa)) out.push_back(k);
  }
  return out;
}

const std::vector<std::size_t> kLengths = {0, 1, 2, 3, 7, 8, 9, 15, 16, 17, 24, 31, 32, 33,
                                           42, 48, 90, 96, 114, 192, 481, 768, 1000};

}  // namespace

TEST_CASE("scalar table is always available", "[simd]") {
  CHECK(rnnd::simd::kernels_for(Isa::kScalar) == &rnnd::simd::scalar_kernels());
  CHECK(rnnd::simd::scalar_kernels().isa == Isa::kScalar);
  CHECK(rnnd::simd::isa_name(Isa::kScalar) == "scalar");
  const char* pinned = std::getenv("RNND_ISA");
  if (pinned && std::string_view(pinned) == "scalar") {
    CHECK(rnnd::simd::active_kernels().isa == Isa::kScalar);
  } else if (!accelerated().empty()) {
    CHECK(rnnd::simd::active_kernels().isa != Isa::kScalar);
  }
}

TEST_CASE("accelerated kernels match the scalar reference", "[simd][property]") {
  const auto tables = accelerated();
  if (tables.empty()) SKIP("no accelerated kernels on this machine");
  const Kernels& ref = rnnd::simd::scalar_kernels();
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  std::uniform_int_distribution<int> q(-127, 127);

  for (const Kernels* k : tables) {
    INFO("isa " << rnnd::simd::isa_name(k->isa));
    for (std::size_t n : kLengths) {
      INFO("n = " << n);
      for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> a(n), b(n);
        std::vector<std::int8_t> w(n);
        std::vector<float> x(n);
        std::vector<std::complex<double>> za(n), zb(n);
        double abs_ab = 0.0, abs_wx = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          a[i] = g(rng);
          b[i] = g(rng);
          w[i] = static_cast<std::int8_t>(q(rng));
          x[i] = static_cast<float>(g(rng));
          za[i] = {g(rng), g(rng)};
          zb[i] = {g(rng), g(rng)};
          abs_ab += std::abs(a[i] * b[i]);
          abs_wx += std::abs(w[i] * double{x[i]});
        }
        // Reassociation error bound: n * eps * sum |terms|.
        const double dot_tol = (n + 1) * 2.3e-16 * abs_ab;
        CHECK(std::abs(k->dot_f64(a.data(), b.data(), n) - ref.dot_f64(a.data(), b.data(), n)) <=
              dot_tol);
        const float f_tol = static_cast<float>((n + 1) * 1.2e-7 * abs_wx);
        CHECK(std::abs(k->dot_i8_f32(w.data(), x.data(), n) -
                       ref.dot_i8_f32(w.data(), x.data(), n)) <= f_tol);

        std::vector<double> p1(n), p2(n), c1(n), c2(n);
        k->power_spectrum(za.data(), p1.data(), n);
        ref.power_spectrum(za.data(), p2.data(), n);
        k->cross_spectrum(za.data(), zb.data(), c1.data(), n);
        ref.cross_spectrum(za.data(), zb.data(), c2.data(), n);
        for (std::size_t i = 0; i < n; ++i) {
          REQUIRE(std::abs(p1[i] - p2[i]) <= 1e-15 * p2[i] + 1e-300);
          const double scale = std::abs(za[i]) * std::abs(zb[i]);
          REQUIRE(std::abs(c1[i] - c2[i]) <= 1e-15 * scale);
        }
      }
    }
  }
}

TEST_CASE("int8 dot product is exact on small integers", "[simd]") {
  // Integer-valued inputs keep every partial sum exact in float.
  std::vector<std::int8_t> w(96);
  std::vector<float> x(96);
  float expected = 0.f;
  for (int i = 0; i < 96; ++i) {
    w[i] = static_cast<std::int8_t>(i % 7 - 3);
    x[i] = static_cast<float>(i % 5 - 2);
    expected += w[i] * x[i];
  }
  CHECK(rnnd::simd::scalar_kernels().dot_i8_f32(w.data(), x.data(), 96) == expected);
  for (const Kernels* k : accelerated()) {
    CHECK(k->dot_i8_f32(w.data(), x.data(), 96) == expected);
  }
}
