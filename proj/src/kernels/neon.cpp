#include <arm_neon.h>

#include <cmath>

#include "lrisp/kernels.hpp"

namespace lrisp::kernels::detail {

std::complex<double> oscillatory_sum_neon(const double* a, std::size_t n, double s0, double h, double kappa) {
  // Lane j holds z = exp(-i phi_{i+j}); each step multiplies by exp(-2 i kappa h).
  const double step = 2.0 * kappa * h;
  const float64x2_t rr = vdupq_n_f64(std::cos(step));
  const float64x2_t ri = vdupq_n_f64(-std::sin(step));
  float64x2_t acc_re = vdupq_n_f64(0.0);
  float64x2_t acc_im = vdupq_n_f64(0.0);
  std::size_t i = 0;
  while (i + 2 <= n) {
    double zr0[2], zi0[2];
    for (int j = 0; j < 2; ++j) {
      const double phi = kappa * (s0 + static_cast<double>(i + j) * h);
      zr0[j] = std::cos(phi);
      zi0[j] = -std::sin(phi);
    }
    float64x2_t zr = vld1q_f64(zr0);
    float64x2_t zi = vld1q_f64(zi0);
    const std::size_t end = std::min(n - (n - i) % 2, i + kReseed);
    for (; i < end; i += 2) {
      const float64x2_t av = vld1q_f64(a + i);
      acc_re = vfmaq_f64(acc_re, av, zr);
      acc_im = vfmaq_f64(acc_im, av, zi);
      const float64x2_t nr = vfmsq_f64(vmulq_f64(zr, rr), zi, ri);
      zi = vfmaq_f64(vmulq_f64(zi, rr), zr, ri);
      zr = nr;
    }
  }
  double re = vgetq_lane_f64(acc_re, 0) + vgetq_lane_f64(acc_re, 1);
  double im = vgetq_lane_f64(acc_im, 0) + vgetq_lane_f64(acc_im, 1);
  for (; i < n; ++i) {
    const double phi = kappa * (s0 + static_cast<double>(i) * h);
    re += a[i] * std::cos(phi);
    im -= a[i] * std::sin(phi);
  }
  return {re, im};
}

}  // namespace lrisp::kernels::detail
