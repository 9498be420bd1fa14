#include "selftest.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "lrisp/phase.hpp"
#include "lrisp/radon.hpp"

namespace lrisp::selftest {

namespace bq = boost::math::quadrature;

double c_coefficient(double rho) {
  const double inner =
      bq::gauss_kronrod<double, 31>::integrate([rho](double t) { return std::pow(1.0 + t * t, -0.5 * rho); }, 0.0, 1.0,
                                               15, 1e-15) -
      1.0 / (1.0 - rho);
  bq::exp_sinh<double> es;
  // t^{-rho} ((1 + t^{-2})^{-rho/2} - 1) without cancellation.
  const double outer = es.integrate(
      [rho](double t) { return std::pow(t, -rho) * std::expm1(-0.5 * rho * std::log1p(1.0 / (t * t))); }, 1.0,
      std::numeric_limits<double>::infinity());
  return 2.0 * (inner + outer);
}

double b_coefficient(double rho) {
  bq::exp_sinh<double> es;
  return 2.0 * es.integrate([rho](double t) { return std::pow(1.0 + t * t, -0.5 * (rho + 2.0)); }, 0.0,
                            std::numeric_limits<double>::infinity());
}

namespace {

Check make(std::string name, double computed, double expected, double tol) {
  Check c{std::move(name), computed, expected, 0.0, tol, false};
  c.rel_error = std::abs(computed - expected) / std::max(std::abs(expected), 1e-300);
  c.passed = c.rel_error <= tol;
  return c;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

PotentialModel bare_radial(double rho) {
  return PotentialModel(3, {HomogeneousTerm{rho, Profile::radial(), 1.0}}, std::nullopt, 1.0, PotentialMode::bare);
}

}  // namespace

std::vector<Check> run_all() {
  std::vector<Check> out;
  const Direction omega(Vec{0.0, 0.0, 1.0});
  const Vec yhat = normalized(Vec{1.0, 2.0, 0.0});

  for (double rho : {0.6, 0.75, 0.9}) {
    const double c = c_coefficient(rho);
    const double b = b_coefficient(rho);
    const auto model = bare_radial(rho);
    for (double r : {1.0, 10.0, 100.0}) {
      const TangentPoint p(omega, yhat * r);
      out.push_back(make("phase rho=" + num(rho) + " |y|=" + num(r),
                         phase_integral(model, p).value, c * std::pow(r, 1.0 - rho), 1e-6));
    }
    const TangentPoint p(omega, yhat * 10.0);
    out.push_back(make("gradient rho=" + num(rho), dot(grad_phase(model, p), yhat),
                       -rho * b * std::pow(10.0, -rho), 1e-8));
    out.push_back(make("cross identity rho=" + num(rho), (1.0 - rho) * c, -rho * b, 1e-8));
  }

  const auto unit = bare_radial(1.0);
  for (double r : {1.0, 10.0, 100.0}) {
    const TangentPoint p(omega, yhat * r);
    out.push_back(make("gradient rho=1 |y|=" + num(r), dot(grad_phase(unit, p), yhat), -2.0 / r, 1e-8));
  }
  out.push_back(make("B(1) = 2", b_coefficient(1.0), 2.0, 1e-12));

  const PlanarFunction gauss{[](const Plane2& p) { return std::exp(-(p[0] * p[0] + p[1] * p[1])); }, 50.0};
  const auto sino = sinogram_of(gauss, RadonGrid{});
  out.push_back(make("gaussian radon v(0)", invert_at_origin(sino, RadonGrid{}.band).value, 1.0, 1e-3));
  return out;
}

}  // namespace lrisp::selftest
