#include <cmath>
#include <cstdlib>
#include <string>

#include "lrisp/errors.hpp"
#include "lrisp/kernels.hpp"

namespace lrisp::kernels {

namespace detail {

std::complex<double> oscillatory_sum_scalar(const double* a, std::size_t n, double s0, double h, double kappa) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double phi = kappa * (s0 + static_cast<double>(i) * h);
    re += a[i] * std::cos(phi);
    im -= a[i] * std::sin(phi);
  }
  return {re, im};
}

}  // namespace detail

namespace {

bool cpu_has(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
#if defined(LRISP_HAVE_AVX2)
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::neon:
#if defined(LRISP_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Isa choose() {
  if (const char* env = std::getenv("LRISP_SIMD")) {
    const std::string want(env);
    for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon}) {
      if (want == isa_name(isa) && cpu_has(isa)) return isa;
    }
    if (want == "scalar") return Isa::scalar;
  }
  if (cpu_has(Isa::avx2)) return Isa::avx2;
  if (cpu_has(Isa::neon)) return Isa::neon;
  return Isa::scalar;
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
    case Isa::neon:
      return "neon";
  }
  return "unknown";
}

std::vector<Isa> available_isas() {
  std::vector<Isa> out;
  for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon})
    if (cpu_has(isa)) out.push_back(isa);
  return out;
}

Isa active_isa() {
  static const Isa isa = choose();
  return isa;
}

std::complex<double> oscillatory_sum_with(Isa isa, const double* a, std::size_t n, double s0, double h,
                                          double kappa) {
  if (!cpu_has(isa)) throw DomainError("kernel variant " + std::string(isa_name(isa)) + " is not available");
  switch (isa) {
#if defined(LRISP_HAVE_AVX2)
    case Isa::avx2:
      return detail::oscillatory_sum_avx2(a, n, s0, h, kappa);
#endif
#if defined(LRISP_HAVE_NEON)
    case Isa::neon:
      return detail::oscillatory_sum_neon(a, n, s0, h, kappa);
#endif
    default:
      break;
  }
  return detail::oscillatory_sum_scalar(a, n, s0, h, kappa);
}

std::complex<double> oscillatory_sum(const double* a, std::size_t n, double s0, double h, double kappa) {
  return oscillatory_sum_with(active_isa(), a, n, s0, h, kappa);
}

}  // namespace lrisp::kernels
