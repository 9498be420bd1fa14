#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lrisp/radon.hpp"
#include "lrisp/separation.hpp"

namespace lrisp {

/// Geometry of one target x != 0: axis x_hat, the plane through x
/// orthogonal to it, and probe directions omega on that plane's unit circle.
/// Sinogram angle theta maps to xi(theta) = embed(cos, sin) and
/// omega(theta) = embed(-sin, cos); sinogram points x + s xi(theta) are
/// orthogonal to omega(theta).
class ReconstructionFrame {
public:
  explicit ReconstructionFrame(const Vec& x, int probe_rays = 8);
  ReconstructionFrame(const PlaneFrame& plane, int probe_rays = 8);

  const Vec& x() const { return plane_.origin(); }
  double radius() const { return radius_; }
  const Vec& axis() const { return axis_; }
  const PlaneFrame& plane() const { return plane_; }

  /// Probe k: direction omega_k and a ray direction u_k orthogonal to it,
  /// tilted off the axis so that the ray data are generic.
  const std::vector<Direction>& probe_omegas() const { return omegas_; }
  const std::vector<Vec>& probe_rays() const { return rays_; }

  Vec xi(double theta) const;
  Direction omega(double theta) const;
  /// scale x + s xi(theta).
  Vec point(double theta, double s, double scale = 1.0) const;

private:
  PlaneFrame plane_;
  double radius_;
  Vec axis_;
  std::vector<Direction> omegas_;
  std::vector<Vec> rays_;
  void make_probes(int n);
};

struct ReconstructionConfig {
  RayGrid detect_grid{10.0, 1e4, 64};
  RayGrid coefficient_grid{10.0, 1e4, 24};
  DetectOptions detect{};
  int probe_rays = 8;
  int chebyshev_nodes = 33;  // per sinogram angle, in psi = atan(s / |x|)
  RadonGrid radon{};
  InversionOptions inversion{};
  int tail_radii = 5;  // tail integral over |x| ratio^i, i < tail_radii
  double tail_ratio = 2.0;
  double stencil = kDefaultStencil;
  int stencil_order = 2;
  double consistency_tol = 0.05;  // Euler vs tail-integral relative gap that gets flagged
  int threads = 0;                // 0: LRISP_THREADS or hardware concurrency
};

/// Coefficients c_j(u, omega(theta_m), x_hat) of the detected components
/// for one target, as functions of psi = atan(s / |x|) along each sinogram
/// angle (u = cos psi x_hat + sin psi xi). Each node value comes from a
/// least-squares fit of ray data with the detected exponents plus the
/// remainder exponents as nuisance terms; between nodes the field is the
/// Chebyshev interpolant. Depending on s / |x| only, one field serves every
/// dilate t x of the target.
class CoefficientField {
public:
  CoefficientField(std::vector<double> exponents, std::size_t angles, std::vector<double> psi_nodes,
                   std::vector<double> values, std::vector<double> rel_errors, double condition);

  const std::vector<double>& exponents() const { return exponents_; }
  std::size_t angles() const { return angles_; }
  double psi_max() const { return psi_nodes_.front(); }
  /// c_j at angle index m and psi in [-psi_max, psi_max].
  double coefficient(std::size_t j, std::size_t m, double psi) const;
  /// Largest standard error of c_j over the nodes, relative to max |c_j|.
  double relative_error(std::size_t j) const { return rel_errors_[j]; }
  double condition() const { return condition_; }

private:
  std::vector<double> exponents_;
  std::size_t angles_;
  std::vector<double> psi_nodes_;  // Chebyshev-Lobatto, decreasing
  std::vector<double> values_;     // [j][m][k]
  std::vector<double> rel_errors_;
  double condition_;
};

CoefficientField fit_coefficient_field(const GradientSource& src, const ReconstructionFrame& frame,
                                       std::span<const double> exponents, std::span<const double> nuisance,
                                       const ReconstructionConfig& cfg);

/// Component-j sinogram of the target dilated by `scale`: at (theta_m, s_n)
/// the value c_j(psi) |scale x + s xi|^{-rho_j}, on the grid scaled by
/// `scale` (offsets times scale). Tails are fitted.
Sinogram build_component_sinogram(const CoefficientField& field, const ReconstructionFrame& frame, std::size_t j,
                                  const RadonGrid& grid, double scale = 1.0);

/// Convenience form: fits the coefficient field from the oracle with the
/// exponents of `decomp` (its remainder exponents as nuisance terms).
Sinogram build_component_sinogram(const SymbolOracle& oracle, const ReconstructionFrame& frame,
                                  const HomogeneousDecomposition& decomp, std::size_t j,
                                  const ReconstructionConfig& cfg = {});

/// d_{x_hat} V_j(x) from a component sinogram: the value of the planar
/// function at the plane origin.
InversionResult reconstruct_partial(const Sinogram& sino, double band, const InversionOptions& opt = {});

enum class ValueMode { euler, tail_integral };

struct ValueEstimate {
  double value = 0.0;
  double error = 0.0;
};

/// V_j(x) from partials p_i = d_{x_hat} V_j(r_i x_hat) at increasing radii
/// r_0 = |x| < r_1 < ...: euler uses -r_0 p_0 / rho only; tail_integral
/// integrates -int_{r_0}^inf p(r) dr piecewise as a power law between
/// radii, with a power-law tail past the last one. Throws DomainError for
/// rho <= 0 and QuadratureError when the tail does not decay faster than 1/r.
ValueEstimate reconstruct_value(double rho, ValueMode mode, std::span<const double> radii,
                                std::span<const double> partials, std::span<const double> partial_errors = {});

struct StageTimes {
  double detection = 0.0;
  double coefficients = 0.0;
  double inversion = 0.0;
  double integration = 0.0;
};

struct ComponentResult {
  std::size_t index = 0;  // 1-based, in order of increasing rho
  double rho = 0.0;
  double rho_spread = 0.0;
  double partial = 0.0;
  double partial_error = 0.0;
  double value_euler = 0.0;
  double value_tail = 0.0;
  double value = 0.0;  // Euler value
  double error = 0.0;  // stage errors summed in quadrature
  bool consistent = true;
  std::optional<double> true_value;
  std::optional<double> true_partial;
  std::vector<std::string> notes;
};

struct TargetResult {
  Vec x;
  std::vector<ComponentResult> components;
  double data_magnitude = 0.0;  // largest |<grad Phi, x_hat>| seen on the probe rays
  std::optional<std::string> failure;
  std::vector<std::string> warnings;
  StageTimes times;
};

struct ReconstructionReport {
  std::vector<double> exponents;
  std::vector<double> exponent_spread;
  std::vector<double> remainder_exponents;
  double remainder_slope = 0.0;
  std::vector<TargetResult> targets;
  std::string status;  // "ok", "no long-range part detected", or "failed targets: ..."
  StageTimes times;
};

/// The full pipeline: probe-ray extraction and exponent detection for every
/// target, consensus exponents over all rays, then per target and
/// component the coefficient field, sinogram inversion at |x| ratio^i, and
/// Euler and tail-integral values. Deterministic for a given oracle and
/// configuration; stage failures are recorded per target.
ReconstructionReport reconstruct_all(const SymbolOracle& oracle, const std::vector<Vec>& targets,
                                     const ReconstructionConfig& cfg = {});

/// Fills true_value and true_partial by matching each detected order to the
/// nearest term of a known model (within gap_min).
void attach_ground_truth(ReconstructionReport& report, const PotentialModel& model, double gap_min = 0.05);

}  // namespace lrisp
