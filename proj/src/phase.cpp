#include "lrisp/phase.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace lrisp {

TangentPoint::TangentPoint(const Direction& omega, const Vec& y) : omega_(omega), y_(reject(y, omega.vec())) {
  if (y.dim() != omega.dim()) throw DomainError("tangent point: dimension mismatch");
}

namespace {

quad::HalfLineOptions half_line_options(const PotentialModel& model, const PhaseOptions& opt) {
  quad::HalfLineOptions h;
  h.tol = opt.tol;
  h.reach = opt.reach;
  const auto rho1 = model.leading_order();
  h.gamma_fallback = 1.0 + (rho1 ? *rho1 : 1.0);
  return h;
}

/// Breakpoints where the cutoff switch turns on along the line y + t omega
/// and along t omega.
std::vector<double> cutoff_breaks(const PotentialModel& model, double ynorm) {
  std::vector<double> br;
  if (model.mode() != PotentialMode::cutoff || model.terms().empty()) return br;
  const double r0 = model.cutoff_radius();
  for (double r : {0.5 * r0, r0}) {
    br.push_back(r);
    const double s = r * r - ynorm * ynorm;
    if (s > 0.0) br.push_back(std::sqrt(s));
  }
  return br;
}

/// int_0^h V_lr(t omega) dt for a bare model (exact: V_lr(t omega) = t^{-rho} V_lr(omega)).
double bare_near_origin(const PotentialModel& model, const Vec& omega, double h) {
  double acc = 0.0;
  for (const auto& term : model.terms()) acc += term.eval(omega) * std::pow(h, 1.0 - term.rho) / (1.0 - term.rho);
  return acc;
}

}  // namespace

ScalarEstimate phase_integral(const PotentialModel& model, const TangentPoint& p, const PhaseOptions& opt) {
  if (p.omega().dim() != model.dim()) throw DomainError("phase_integral: dimension mismatch");
  const Vec& y = p.y();
  const double ynorm = norm(y);
  if (ynorm == 0.0) return {0.0, 0.0};
  const bool bare = model.mode() == PotentialMode::bare;
  if (bare && model.has_unit_order_term()) {
    throw DomainError("phase_integral: non-integrable at t=0 for an order-1 bare term; use cutoff mode");
  }
  const double outer = bare ? ynorm : std::max(ynorm, model.cutoff_radius());
  const auto hopt = half_line_options(model, opt);
  const auto breaks = cutoff_breaks(model, ynorm);
  const auto& sr = model.short_range();

  ScalarEstimate out;
  for (int sign : {+1, -1}) {
    const Vec w = p.omega().vec() * static_cast<double>(sign);
    auto f = [&](double t) {
      if (bare && t <= ynorm) {
        // The singular part of V(t w) on [0, |y|] is integrated analytically.
        double v = model.eval(y + w * t);
        if (sr) v -= sr->eval_radius(t);
        return v;
      }
      return model.line_difference(y, w, t);
    };
    auto res = quad::integrate_half_line(f, ynorm, outer, breaks, hopt);
    out.value += res.value;
    out.error += res.error;
    if (bare) out.value -= bare_near_origin(model, w, ynorm);
  }
  return out;
}

Vec grad_phase(const PotentialModel& model, const TangentPoint& p, const PhaseOptions& opt, double* est_error) {
  if (p.omega().dim() != model.dim()) throw DomainError("grad_phase: dimension mismatch");
  const Vec& y = p.y();
  const double ynorm = norm(y);
  const bool bare = model.mode() == PotentialMode::bare;
  if (ynorm == 0.0 && bare && !model.terms().empty()) {
    throw DomainError("grad_phase: y = 0 in bare mode (the line passes through the origin)");
  }
  const Vec& omega = p.omega().vec();
  const double scale = ynorm > 0.0 ? ynorm : 0.5 * model.cutoff_radius();
  const double outer = bare ? scale : std::max(scale, model.cutoff_radius());
  auto hopt = half_line_options(model, opt);
  const auto breaks = cutoff_breaks(model, ynorm);

  Vec total(model.dim());
  double err = 0.0;
  for (int sign : {+1, -1}) {
    const Vec w = omega * static_cast<double>(sign);
    auto f = [&](double t) { return reject(model.grad(y + w * t), omega); };
    auto res = quad::integrate_half_line(f, scale, outer, breaks, hopt);
    total += res.value;
    err += res.error;
  }
  if (est_error) *est_error = err;
  return reject(total, omega);
}

Vec grad_phase_term(const HomogeneousTerm& term, const TangentPoint& p, const PhaseOptions& opt) {
  const PotentialModel single(p.omega().dim(), {term}, std::nullopt, 1.0, PotentialMode::bare);
  return grad_phase(single, p, opt);
}

PhaseValue evaluate_phase(const PotentialModel& model, const TangentPoint& p, const PhaseOptions& opt) {
  PhaseValue out;
  double gerr = 0.0;
  const bool bare_at_zero =
      model.mode() == PotentialMode::bare && norm(p.y()) == 0.0 && !model.terms().empty();
  out.grad = bare_at_zero ? Vec(model.dim()) : grad_phase(model, p, opt, &gerr);
  if (model.mode() == PotentialMode::bare && model.has_unit_order_term()) {
    out.value = 0.0;
    out.est_error = std::numeric_limits<double>::infinity();
    return out;
  }
  const auto phi = phase_integral(model, p, opt);
  out.value = phi.value;
  out.est_error = std::max(phi.error, gerr);
  return out;
}

double theta_pm(const ShortRangeTerm& sr, const Vec& xi, int sign, const PhaseOptions& opt) {
  const double xn = norm(xi);
  if (xn == 0.0) throw DomainError("theta_pm: xi = 0");
  if (sign != 1 && sign != -1) throw DomainError("theta_pm: sign must be +1 or -1");
  quad::HalfLineOptions h;
  h.tol = opt.tol;
  h.reach = opt.reach;
  h.gamma_fallback = sr.rho_sr;
  const Vec dir = xi * static_cast<double>(sign);
  auto f = [&](double s) { return sr.eval(dir * s); };
  const double scale = 1.0 / xn;
  const auto res = quad::integrate_half_line(f, scale, scale, {}, h);
  // int_0^{-inf} V(xi s) ds = -int_0^{inf} V(-xi u) du
  return 0.5 * sign * res.value;
}

GaugePhase GaugePhase::from_short_range(const ShortRangeTerm& sr, const PhaseOptions& opt) {
  return {[sr, opt](const Vec& xi) { return theta_pm(sr, xi, +1, opt); },
          [sr, opt](const Vec& xi) { return theta_pm(sr, xi, -1, opt); }};
}

GaugePhase GaugePhase::none() {
  return {[](const Vec&) { return 0.0; }, [](const Vec&) { return 0.0; }};
}

double GaugePhase::shift(double k, const Direction& omega) const {
  const Vec xi = omega.vec() * k;
  return 2.0 * k * theta_plus(xi) - 2.0 * k * theta_minus(xi);
}

PhaseValue gauge_shifted_phase(const PhaseValue& phi, const GaugePhase& gauge, double k, const Direction& omega) {
  if (!(k > 0.0)) throw DomainError("gauge shift needs k > 0");
  PhaseValue out = phi;
  out.value += gauge.shift(k, omega);
  return out;
}

}  // namespace lrisp
