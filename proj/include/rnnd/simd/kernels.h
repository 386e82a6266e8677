#ifndef RNND_SIMD_KERNELS_H_
#define RNND_SIMD_KERNELS_H_

#include <complex>
#include <cstddef>
#include <cstdint>
#include <string_view>

namespace rnnd::simd {

enum class Isa { kScalar, kAvx2, kNeon };

std::string_view isa_name(Isa isa);

// Inner loops that dominate a frame: pitch correlations (double), int8 weight
// rows against float activations, and the weighted spectrum sums behind band
// energies. Every ISA variant must agree with the scalar table up to
// floating-point reassociation.
struct Kernels {
  Isa isa;
  // sum_i a[i] * b[i]
  double (*dot_f64)(const double* a, const double* b, std::size_t n);
  // sum_i w[i] * x[i], accumulated in float
  float (*dot_i8_f32)(const std::int8_t* w, const float* x, std::size_t n);
  // out[i] = |z[i]|^2
  void (*power_spectrum)(const std::complex<double>* z, double* out,
                         std::size_t n);
  // out[i] = Re(a[i] * conj(b[i]))
  void (*cross_spectrum)(const std::complex<double>* a,
                         const std::complex<double>* b, double* out,
                         std::size_t n);
};

const Kernels& scalar_kernels();

// nullptr when the ISA was not compiled in or the running CPU lacks it.
const Kernels* kernels_for(Isa isa);

// Best table for this CPU, chosen once. Setting RNND_ISA=scalar in the
// environment pins the scalar reference.
const Kernels& active_kernels();

}  // namespace rnnd::simd

#endif  // RNND_SIMD_KERNELS_H_
