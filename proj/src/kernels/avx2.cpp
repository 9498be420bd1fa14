#include <immintrin.h>

#include <cmath>

#include "lrisp/kernels.hpp"

namespace lrisp::kernels::detail {

std::complex<double> oscillatory_sum_avx2(const double* a, std::size_t n, double s0, double h, double kappa) {
  // Lane j holds z = exp(-i phi_{i+j}); each step multiplies by exp(-4 i kappa h).
  const double step = 4.0 * kappa * h;
  const __m256d rr = _mm256_set1_pd(std::cos(step));
  const __m256d ri = _mm256_set1_pd(-std::sin(step));
  __m256d acc_re = _mm256_setzero_pd();
  __m256d acc_im = _mm256_setzero_pd();
  std::size_t i = 0;
  while (i + 4 <= n) {
    alignas(32) double zr0[4], zi0[4];
    for (int j = 0; j < 4; ++j) {
      const double phi = kappa * (s0 + static_cast<double>(i + j) * h);
      zr0[j] = std::cos(phi);
      zi0[j] = -std::sin(phi);
    }
    __m256d zr = _mm256_load_pd(zr0);
    __m256d zi = _mm256_load_pd(zi0);
    const std::size_t end = std::min(n - (n - i) % 4, i + kReseed);
    for (; i < end; i += 4) {
      const __m256d av = _mm256_loadu_pd(a + i);
      acc_re = _mm256_fmadd_pd(av, zr, acc_re);
      acc_im = _mm256_fmadd_pd(av, zi, acc_im);
      const __m256d nr = _mm256_fmsub_pd(zr, rr, _mm256_mul_pd(zi, ri));
      zi = _mm256_fmadd_pd(zr, ri, _mm256_mul_pd(zi, rr));
      zr = nr;
    }
  }
  alignas(32) double re4[4], im4[4];
  _mm256_store_pd(re4, acc_re);
  _mm256_store_pd(im4, acc_im);
  double re = (re4[0] + re4[1]) + (re4[2] + re4[3]);
  double im = (im4[0] + im4[1]) + (im4[2] + im4[3]);
  for (; i < n; ++i) {
    const double phi = kappa * (s0 + static_cast<double>(i) * h);
    re += a[i] * std::cos(phi);
    im -= a[i] * std::sin(phi);
  }
  return {re, im};
}

}  // namespace lrisp::kernels::detail
