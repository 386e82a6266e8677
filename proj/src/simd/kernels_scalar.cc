#include "simd/kernels_internal.h"

namespace rnnd::simd {
namespace {

double dot_f64(const double* a, const double* b, std::size_t n) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

float dot_i8_f32(const std::int8_t* w, const float* x, std::size_t n) {
  float sum = 0.f;
  for (std::size_t i = 0; i < n; ++i) sum += static_cast<float>(w[i]) * x[i];
  return sum;
}

void power_spectrum(const std::complex<double>* z, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = z[i].real() * z[i].real() + z[i].imag() * z[i].imag();
  }
}

void cross_spectrum(const std::complex<double>* a,
                    const std::complex<double>* b, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
  }
}

}  // namespace

const Kernels& scalar_kernels() {
  static const Kernels table{Isa::kScalar, &dot_f64, &dot_i8_f32,
                             &power_spectrum, &cross_spectrum};
  return table;
}

}  // namespace rnnd::simd
