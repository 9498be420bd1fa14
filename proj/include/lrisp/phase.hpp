#pragma once

#include <functional>

#include "lrisp/potential.hpp"
#include "lrisp/quadrature.hpp"

namespace lrisp {

/// Point (y, omega) of the cotangent bundle of the sphere: omega a unit
/// direction, y an impact parameter orthogonal to it.
class TangentPoint {
public:
  /// Re-projects `y` onto the hyperplane orthogonal to `omega`.
  TangentPoint(const Direction& omega, const Vec& y);

  const Direction& omega() const { return omega_; }
  const Vec& y() const { return y_; }

private:
  Direction omega_;
  Vec y_;
};

struct PhaseValue {
  double value = 0.0;  // Phi(y, omega)
  Vec grad;            // tangential gradient in y
  double est_error = 0.0;
};

struct PhaseOptions {
  quad::Tolerance tol{1e-14, 1e-11, 20000};
  /// Quadrature reach in units of max(|y|, R0); beyond it the tail is fitted.
  double reach = 1e7;
};

struct ScalarEstimate {
  double value = 0.0;
  double error = 0.0;
};

/// Phi(y, omega) = int (V(y + t omega) - V(t omega)) dt.
/// Throws DomainError for a bare model with an order-1 term (the subtracted
/// V(t omega) is not integrable at t = 0).
ScalarEstimate phase_integral(const PotentialModel& model, const TangentPoint& p,
                              const PhaseOptions& opt = {});

/// Tangential part of int grad V(y + t omega) dt. In bare mode y must be
/// nonzero.
Vec grad_phase(const PotentialModel& model, const TangentPoint& p, const PhaseOptions& opt = {},
               double* est_error = nullptr);

/// Gradient contribution of one bare homogeneous term (homogeneous of order
/// -rho in y).
Vec grad_phase_term(const HomogeneousTerm& term, const TangentPoint& p, const PhaseOptions& opt = {});

/// Phase value and gradient together. The value is left at 0 with an
/// infinite error estimate when it is undefined (bare order-1 term).
PhaseValue evaluate_phase(const PotentialModel& model, const TangentPoint& p, const PhaseOptions& opt = {});

/// theta_+-(xi) = (1/2) int_0^{+-inf} V_sr(xi s) ds, the integral taken with
/// its orientation (so the minus branch carries a sign).
double theta_pm(const ShortRangeTerm& sr, const Vec& xi, int sign, const PhaseOptions& opt = {});

/// Pair of momentum-space phase functions that reparametrize the modified
/// free dynamics.
struct GaugePhase {
  std::function<double(const Vec&)> theta_plus;
  std::function<double(const Vec&)> theta_minus;

  static GaugePhase from_short_range(const ShortRangeTerm& sr, const PhaseOptions& opt = {});
  static GaugePhase none();

  /// 2k theta_+(k omega) - 2k theta_-(k omega).
  double shift(double k, const Direction& omega) const;
};

/// Phi -> Phi + 2k theta_+(k omega) - 2k theta_-(k omega); gradient untouched.
PhaseValue gauge_shifted_phase(const PhaseValue& phi, const GaugePhase& gauge, double k,
                               const Direction& omega);

}  // namespace lrisp
