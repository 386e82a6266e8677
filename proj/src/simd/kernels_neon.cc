// AArch64 only; NEON is part of the base ISA there, so no runtime probe.
#include <arm_neon.h>

#include "simd/kernels_internal.h"

namespace rnnd::simd {
namespace {

double dot_f64(const double* a, const double* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
  }
  double sum = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

float dot_i8_f32(const std::int8_t* w, const float* x, std::size_t n) {
  float32x4_t acc0 = vdupq_n_f32(0.f);
  float32x4_t acc1 = vdupq_n_f32(0.f);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    int16x8_t q = vmovl_s8(vld1_s8(w + i));
    float32x4_t w0 = vcvtq_f32_s32(vmovl_s16(vget_low_s16(q)));
    float32x4_t w1 = vcvtq_f32_s32(vmovl_s16(vget_high_s16(q)));
    acc0 = vfmaq_f32(acc0, w0, vld1q_f32(x + i));
    acc1 = vfmaq_f32(acc1, w1, vld1q_f32(x + i + 4));
  }
  float sum = vaddvq_f32(vaddq_f32(acc0, acc1));
  for (; i < n; ++i) sum += static_cast<float>(w[i]) * x[i];
  return sum;
}

void power_spectrum(const std::complex<double>* z, double* out, std::size_t n) {
  const double* p = reinterpret_cast<const double*>(z);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t a = vld1q_f64(p + 2 * i);
    float64x2_t b = vld1q_f64(p + 2 * i + 2);
    vst1q_f64(out + i, vpaddq_f64(vmulq_f64(a, a), vmulq_f64(b, b)));
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
  for (; i + 2 <= n; i += 2) {
    float64x2_t m0 = vmulq_f64(vld1q_f64(pa + 2 * i), vld1q_f64(pb + 2 * i));
    float64x2_t m1 =
        vmulq_f64(vld1q_f64(pa + 2 * i + 2), vld1q_f64(pb + 2 * i + 2));
    vst1q_f64(out + i, vpaddq_f64(m0, m1));
  }
  for (; i < n; ++i) {
    out[i] = a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
  }
}

}  // namespace

const Kernels& neon_kernels() {
  static const Kernels table{Isa::kNeon, &dot_f64, &dot_i8_f32,
                             &power_spectrum, &cross_spectrum};
  return table;
}

}  // namespace rnnd::simd
