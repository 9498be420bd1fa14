#pragma once

#include <functional>
#include <string>
#include <vector>

#include "lrisp/symbol.hpp"

namespace lrisp {

/// Geometric radius grid s_i = s_min q^i, i = 0..points-1, ending at s_max.
struct RayGrid {
  double s_min = 10.0;
  double s_max = 1e4;
  int points = 64;

  std::vector<double> radii() const;
  double ratio() const;
};

/// Source of directional phase-gradient data <grad Phi(y, omega), e>.
using GradientSource = std::function<double(const TangentPoint&, const Vec&)>;

/// Forward model: direct quadrature of grad Phi.
GradientSource model_gradient_source(const PotentialModel& model, PhaseOptions opt = {});
/// Inverse data: log-derivative extraction from symbol samples.
GradientSource oracle_gradient_source(const SymbolOracle& oracle, double h = kDefaultStencil, int order = 2);

struct RaySamples {
  Direction omega;
  Vec u;  // ray direction in the hyperplane orthogonal to omega
  Vec e;  // probe direction in the same hyperplane
  std::vector<double> radii;
  std::vector<double> values;
};

/// Samples g(s_i) = <grad Phi(s_i u, omega), e>.
RaySamples sample_ray(const GradientSource& src, const Direction& omega, const Vec& u, const Vec& e,
                      const RayGrid& grid);

struct KnownFit {
  std::vector<double> coeffs;
  std::vector<double> std_errors;  // least-squares standard errors of coeffs
  double residual = 0.0;      // RMS of the unweighted residual
  double condition = 1.0;     // of the column-scaled weighted design
};

/// Weighted linear least squares of g(s) against {s^{-rho_j}}; weights
/// s^{min rho} put every sample of the leading term on an equal footing.
/// Throws ConditioningError above `max_condition`.
KnownFit fit_known_exponents(std::span<const double> radii, std::span<const double> values,
                             std::span<const double> exponents, double max_condition = 1e13);
KnownFit fit_known_exponents(const RaySamples& samples, std::span<const double> exponents,
                             double max_condition = 1e13);

struct DetectOptions {
  double delta = 0.05;         // remainder margin: remainder decays faster than s^{-1-delta}
  double gap_min = 0.05;       // closer exponents are merged
  double sv_tol = 1e-11;       // Hankel singular values kept, relative to the largest
  int max_terms = 10;          // cap on the exponential-sum order
  double significance = 1e-7;  // component amplitude floor relative to max |g|
  double zero_floor = 1e-14;   // max |g| below this counts as no data
};

struct HomogeneousDecomposition {
  std::vector<double> exponents;     // long-range orders, increasing, in (1/2, 1]
  std::vector<double> coefficients;  // matching c_j for the sampled ray
  std::vector<double> remainder_exponents;
  std::vector<double> remainder_coefficients;
  double remainder_slope = 0.0;   // log-log slope of what is left after the long-range part
  double leading_slope = 0.0;     // extrapolated log-log slope at the largest radii
  double conditioning = 1.0;
  double residual = 0.0;
  std::vector<std::string> warnings;

  std::size_t size() const { return exponents.size(); }
};

/// Detects the homogeneous long-range components of ray data without prior
/// knowledge of their number or orders. Throws ModelClassError when the data
/// decay more slowly than s^{-1/2}.
HomogeneousDecomposition detect_exponents(const RaySamples& samples, const DetectOptions& opt = {});

/// c_j s^{-rho_j} (j is 0-based).
double evaluate_component(const HomogeneousDecomposition& decomp, std::size_t j, double s);

/// Log-log slope at the end of the grid, extrapolated (Aitken) over three
/// nested stencils.
double extrapolated_tail_slope(std::span<const double> radii, std::span<const double> values);

/// Consensus over several rays: long-range exponents clustered within
/// gap_min, kept when supported by at least max(1, ceil(n/4)) rays, merged
/// by median; the same for remainder exponents (majority support).
struct ExponentConsensus {
  std::vector<double> exponents;
  std::vector<double> exponent_spread;  // largest deviation of a supporting ray from the median
  std::vector<double> remainder_exponents;
  double remainder_slope = 0.0;
  double conditioning = 1.0;
};
ExponentConsensus consensus_exponents(const std::vector<HomogeneousDecomposition>& per_ray,
                                      const DetectOptions& opt = {});

}  // namespace lrisp
