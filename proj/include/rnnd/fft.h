#ifndef RNND_FFT_H_
#define RNND_FFT_H_

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace rnnd {

// Mixed-radix decimation-in-time FFT for any length. Radices 4, 2, 3 and 5
// are factored out first; any remaining prime uses the O(p^2) butterfly.
// Plans are immutable once built, so one plan may serve many threads.
class ComplexFft {
 public:
  explicit ComplexFft(std::size_t n);

  std::size_t size() const { return n_; }

  // Unnormalized forward transform, X(k) = sum_n x(n) e^{-2 pi i k n / N}.
  void forward(std::span<const std::complex<double>> in,
               std::span<std::complex<double>> out) const;
  // Unnormalized inverse (positive exponent); callers scale by 1/N.
  void inverse(std::span<const std::complex<double>> in,
               std::span<std::complex<double>> out) const;

 private:
  void transform(const std::complex<double>* in,
                 std::complex<double>* out, bool inverse) const;
  void work(std::complex<double>* out, const std::complex<double>* in,
            std::size_t stride, std::size_t stage,
            const std::vector<std::complex<double>>& twiddles,
            std::complex<double>* scratch) const;

  std::size_t n_;
  std::vector<std::size_t> radices_;  // radix of each stage
  std::vector<std::size_t> spans_;    // remaining length after each stage
  std::vector<std::complex<double>> twiddles_;
  std::vector<std::complex<double>> inverse_twiddles_;
  std::size_t max_radix_ = 1;
};

// Real-input transform of even length N through a half-length complex FFT.
// Forward is unnormalized and produces bins 0..N/2; inverse assumes the
// conjugate-symmetric extension and scales by 1/N.
class RealFft {
 public:
  explicit RealFft(std::size_t n);

  std::size_t size() const { return n_; }
  std::size_t bins() const { return n_ / 2 + 1; }

  void forward(std::span<const double> in,
               std::span<std::complex<double>> out) const;
  void inverse(std::span<const std::complex<double>> in,
               std::span<double> out) const;

 private:
  std::size_t n_;
  ComplexFft half_;
  std::vector<std::complex<double>> rotation_;  // e^{-2 pi i k / N}, k <= N/2
};

}  // namespace rnnd

#endif  // RNND_FFT_H_
