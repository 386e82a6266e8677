// Built with -mavx2 -mfma; only reached after a runtime CPU check.
#include <immintrin.h>

#include "simd/kernels_internal.h"

namespace rnnd::simd {
namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

inline float hsum(__m256 v) {
  __m128 lo = _mm256_castps256_ps128(v);
  __m128 hi = _mm256_extractf128_ps(v, 1);
  lo = _mm_add_ps(lo, hi);
  lo = _mm_add_ps(lo, _mm_movehl_ps(lo, lo));
  lo = _mm_add_ss(lo, _mm_movehdup_ps(lo));
  return _mm_cvtss_f32(lo);
}

double dot_f64(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4),
                           _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  }
  double sum = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

float dot_i8_f32(const std::int8_t* w, const float* x, std::size_t n) {
  __m256 acc0 = _mm256_setzero_ps();
  __m256 acc1 = _mm256_setzero_ps();
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    __m128i q = _mm_loadu_si128(reinterpret_cast<const __m128i*>(w + i));
    __m256 w0 = _mm256_cvtepi32_ps(_mm256_cvtepi8_epi32(q));
    __m256 w1 = _mm256_cvtepi32_ps(_mm256_cvtepi8_epi32(_mm_srli_si128(q, 8)));
    acc0 = _mm256_fmadd_ps(w0, _mm256_loadu_ps(x + i), acc0);
    acc1 = _mm256_fmadd_ps(w1, _mm256_loadu_ps(x + i + 8), acc1);
  }
  for (; i + 8 <= n; i += 8) {
    __m128i q = _mm_loadl_epi64(reinterpret_cast<const __m128i*>(w + i));
    __m256 w0 = _mm256_cvtepi32_ps(_mm256_cvtepi8_epi32(q));
    acc0 = _mm256_fmadd_ps(w0, _mm256_loadu_ps(x + i), acc0);
  }
  float sum = hsum(_mm256_add_ps(acc0, acc1));
  for (; i < n; ++i) sum += static_cast<float>(w[i]) * x[i];
  return sum;
}

// complex<double> is laid out as {re, im}; two bins fill one register.
void power_spectrum(const std::complex<double>* z, double* out, std::size_t n) {
  const double* p = reinterpret_cast<const double*>(z);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d a = _mm256_loadu_pd(p + 2 * i);
    __m256d b = _mm256_loadu_pd(p + 2 * i + 4);
    __m256d s = _mm256_hadd_pd(_mm256_mul_pd(a, a), _mm256_mul_pd(b, b));
    _mm256_storeu_pd(out + i, _mm256_permute4x64_pd(s, 0xD8));
  }
  for (; i < n; ++i) {
    out[i] = z[i].real() * z[i].real() + z[i].imag() * z[i].imag();
  }
}

void cross_spectrum(const std::complex<double>* a,
                    const std::complex<double>* b, double* out, std::size_t n) {
  const double* pa = reinterpret_cast<const double*>(a);
  const double* pb = reinterpret_cast<const double*>(b);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d m0 = _mm256_mul_pd(_mm256_loadu_pd(pa + 2 * i),
                               _mm256_loadu_pd(pb + 2 * i));
    __m256d m1 = _mm256_mul_pd(_mm256_loadu_pd(pa + 2 * i + 4),
                               _mm256_loadu_pd(pb + 2 * i + 4));
    _mm256_storeu_pd(out + i,
                     _mm256_permute4x64_pd(_mm256_hadd_pd(m0, m1), 0xD8));
  }
  for (; i < n; ++i) {
    out[i] = a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
  }
}

}  // namespace

const Kernels& avx2_kernels() {
  static const Kernels table{Isa::kAvx2, &dot_f64, &dot_i8_f32,
                             &power_spectrum, &cross_spectrum};
  return table;
}

}  // namespace rnnd::simd
