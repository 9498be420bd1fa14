#pragma once

#include <complex>
#include <cstddef>
#include <string_view>
#include <vector>

/// Inner loop of the Fourier-slice quadrature: sums of the form
///   sum_n a_n exp(-i kappa (s0 + n h))
/// over a uniform offset grid. A scalar reference and vector variants are
/// built; the variant is chosen once at run time from the CPU features and
/// the LRISP_SIMD environment variable (scalar | avx2 | neon | auto).
namespace lrisp::kernels {

enum class Isa { scalar, avx2, neon };

std::string_view isa_name(Isa isa);

/// Variants compiled into this build and supported by the running CPU.
std::vector<Isa> available_isas();

/// Variant used by oscillatory_sum.
Isa active_isa();

std::complex<double> oscillatory_sum(const double* a, std::size_t n, double s0, double h, double kappa);

/// Runs a specific variant; throws DomainError if it is not available.
std::complex<double> oscillatory_sum_with(Isa isa, const double* a, std::size_t n, double s0, double h,
                                          double kappa);

namespace detail {
std::complex<double> oscillatory_sum_scalar(const double* a, std::size_t n, double s0, double h, double kappa);
std::complex<double> oscillatory_sum_avx2(const double* a, std::size_t n, double s0, double h, double kappa);
std::complex<double> oscillatory_sum_neon(const double* a, std::size_t n, double s0, double h, double kappa);
/// Block length after which the vector variants re-seed their phase
/// rotation from exact sin/cos.
inline constexpr std::size_t kReseed = 64;
}  // namespace detail

}  // namespace lrisp::kernels
