#include "rnnd/fft.h"

#include <algorithm>
#include <array>
#include <cassert>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace rnnd {
namespace {

constexpr std::size_t kStackRadix = 16;

// Per-thread buffers keep the per-frame transforms allocation-free.
std::pair<std::span<std::complex<double>>, std::span<std::complex<double>>>
workspace(std::size_t m) {
  thread_local std::vector<std::complex<double>> buffer;
  if (buffer.size() < 2 * m) buffer.resize(2 * m);
  return {std::span(buffer).first(m), std::span(buffer).subspan(m, m)};
}

std::vector<std::size_t> factorize(std::size_t n) {
  std::vector<std::size_t> radices;
  for (std::size_t p : {4u, 2u, 3u, 5u}) {
    while (n % p == 0) {
      radices.push_back(p);
      n /= p;
    }
  }
  for (std::size_t p = 7; n > 1; p += 2) {
    while (n % p == 0) {
      radices.push_back(p);
      n /= p;
    }
  }
  return radices;
}

}  // namespace

ComplexFft::ComplexFft(std::size_t n) : n_(n) {
  if (n == 0) throw std::invalid_argument("FFT length must be positive");
  radices_ = n == 1 ? std::vector<std::size_t>{1} : factorize(n);
  std::size_t remaining = n;
  for (std::size_t p : radices_) {
    remaining /= p;
    spans_.push_back(remaining);
    max_radix_ = std::max(max_radix_, p);
  }
  twiddles_.resize(n);
  inverse_twiddles_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double phase = -2.0 * std::numbers::pi * static_cast<double>(i) /
                         static_cast<double>(n);
    twiddles_[i] = std::polar(1.0, phase);
    inverse_twiddles_[i] = std::conj(twiddles_[i]);
  }
}

void ComplexFft::forward(std::span<const std::complex<double>> in,
                         std::span<std::complex<double>> out) const {
  if (in.size() != n_ || out.size() != n_) {
    throw std::invalid_argument("FFT buffer size mismatch");
  }
  transform(in.data(), out.data(), false);
}

void ComplexFft::inverse(std::span<const std::complex<double>> in,
                         std::span<std::complex<double>> out) const {
  if (in.size() != n_ || out.size() != n_) {
    throw std::invalid_argument("FFT buffer size mismatch");
  }
  transform(in.data(), out.data(), true);
}

void ComplexFft::transform(const std::complex<double>* in,
                           std::complex<double>* out, bool inverse) const {
  assert(in != out);
  const auto& tw = inverse ? inverse_twiddles_ : twiddles_;
  if (max_radix_ <= kStackRadix) {
    std::array<std::complex<double>, kStackRadix> scratch;
    work(out, in, 1, 0, tw, scratch.data());
  } else {
    std::vector<std::complex<double>> scratch(max_radix_);
    work(out, in, 1, 0, tw, scratch.data());
  }
}

void ComplexFft::work(std::complex<double>* out,
                      const std::complex<double>* in, std::size_t stride,
                      std::size_t stage,
                      const std::vector<std::complex<double>>& tw,
                      std::complex<double>* scratch) const {
  const std::size_t p = radices_[stage];
  const std::size_t m = spans_[stage];
  if (m == 1) {
    for (std::size_t j = 0; j < p; ++j) out[j] = in[j * stride];
  } else {
    for (std::size_t j = 0; j < p; ++j) {
      work(out + j * m, in + j * stride, stride * p, stage + 1, tw, scratch);
    }
  }
  if (p == 1) return;

  if (p == 2) {
    for (std::size_t u = 0; u < m; ++u) {
      const std::complex<double> t = out[u + m] * tw[u * stride];
      out[u + m] = out[u] - t;
      out[u] += t;
    }
    return;
  }

  for (std::size_t u = 0; u < m; ++u) {
    for (std::size_t q = 0; q < p; ++q) scratch[q] = out[u + q * m];
    for (std::size_t q1 = 0; q1 < p; ++q1) {
      const std::size_t k = u + q1 * m;
      std::complex<double> acc = scratch[0];
      std::size_t index = 0;
      for (std::size_t q = 1; q < p; ++q) {
        index += stride * k;
        if (index >= n_) index -= n_;
        acc += scratch[q] * tw[index];
      }
      out[k] = acc;
    }
  }
}

RealFft::RealFft(std::size_t n) : n_(n), half_(n / 2 == 0 ? 1 : n / 2) {
  if (n < 2 || n % 2 != 0) {
    throw std::invalid_argument("real FFT length must be even");
  }
  rotation_.resize(n / 2 + 1);
  for (std::size_t k = 0; k <= n / 2; ++k) {
    rotation_[k] = std::polar(1.0, -2.0 * std::numbers::pi *
                                       static_cast<double>(k) /
                                       static_cast<double>(n));
  }
}

// Even/odd samples are packed as z(n) = x(2n) + i x(2n+1). With Z = FFT(z),
// E(k) = (Z(k) + Z*(M-k)) / 2 and O(k) = (Z(k) - Z*(M-k)) / 2i are the
// half-length spectra, and X(k) = E(k) + e^{-2 pi i k/N} O(k).
void RealFft::forward(std::span<const double> in,
                      std::span<std::complex<double>> out) const {
  if (in.size() != n_ || out.size() != bins()) {
    throw std::invalid_argument("real FFT buffer size mismatch");
  }
  const std::size_t m = n_ / 2;
  auto [packed, z] = workspace(m);
  for (std::size_t i = 0; i < m; ++i) packed[i] = {in[2 * i], in[2 * i + 1]};
  half_.forward(packed, z);

  const std::complex<double> minus_half_i{0.0, -0.5};
  for (std::size_t k = 0; k <= m; ++k) {
    const std::complex<double> zk = z[k % m];
    const std::complex<double> zc = std::conj(z[(m - k) % m]);
    const std::complex<double> even = 0.5 * (zk + zc);
    const std::complex<double> odd = minus_half_i * (zk - zc);
    out[k] = even + rotation_[k] * odd;
  }
  out[0].imag(0.0);
  out[m].imag(0.0);
}

void RealFft::inverse(std::span<const std::complex<double>> in,
                      std::span<double> out) const {
  if (in.size() != bins() || out.size() != n_) {
    throw std::invalid_argument("real FFT buffer size mismatch");
  }
  const std::size_t m = n_ / 2;
  auto [z, packed] = workspace(m);
  const std::complex<double> i_unit{0.0, 1.0};
  for (std::size_t k = 0; k < m; ++k) {
    const std::complex<double> xk = in[k];
    const std::complex<double> xc = std::conj(in[m - k]);
    const std::complex<double> even = 0.5 * (xk + xc);
    const std::complex<double> odd = 0.5 * (xk - xc) * std::conj(rotation_[k]);
    z[k] = even + i_unit * odd;
  }
  half_.inverse(z, packed);
  const double scale = 1.0 / static_cast<double>(m);
  for (std::size_t i = 0; i < m; ++i) {
    out[2 * i] = packed[i].real() * scale;
    out[2 * i + 1] = packed[i].imag() * scale;
  }
}

}  // namespace rnnd
