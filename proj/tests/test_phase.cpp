#include <doctest.h>

#include <cmath>

#include "lrisp/errors.hpp"
#include "lrisp/phase.hpp"
#include "oracles.hpp"

using namespace lrisp;

namespace {

PotentialModel bare_radial(double rho) {
  return PotentialModel(3, {HomogeneousTerm{rho, Profile::radial(), 1.0}}, std::nullopt, 1.0, PotentialMode::bare);
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }
double rel(const Vec& a, const Vec& b) { return norm(a - b) / std::max(norm(b), 1e-300); }

const Direction kOmega(Vec{0.0, 0.0, 1.0});
const Vec kYhat = normalized(Vec{1.0, 2.0, 0.0});

}  // namespace

TEST_CASE("C and B oracles agree with their Beta-function forms") {
  for (double rho : {0.55, 0.6, 0.75, 0.9, 0.99}) {
    CHECK(rel(oracle::c_quadrature(rho), oracle::c_gamma(rho)) <= 1e-12);
    CHECK(rel(oracle::b_quadrature(rho), oracle::b_gamma(rho)) <= 1e-12);
    CHECK(oracle::c_quadrature(rho) < 0.0);
  }
  CHECK(oracle::b_quadrature(1.0) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("phase vanishes at y = 0") {
  const TangentPoint p(kOmega, Vec{0.0, 0.0, 0.0});
  CHECK(phase_integral(fixtures::p3(), p).value == 0.0);
  CHECK(phase_integral(fixtures::p1(PotentialMode::cutoff), p).value == 0.0);
}

TEST_CASE("bare radial phase closed form") {
  for (double rho : {0.6, 0.75, 0.9}) {
    const double c = oracle::c_quadrature(rho);
    const auto m = bare_radial(rho);
    for (double r : {0.1, 1.0, 10.0, 100.0, 1e4}) {
      const auto est = phase_integral(m, TangentPoint(kOmega, kYhat * r));
      CHECK(rel(est.value, c * std::pow(r, 1.0 - rho)) <= 1e-8);
      CHECK(est.error <= 1e-9 * std::max(1.0, std::abs(est.value)));
    }
  }
}

TEST_CASE("bare order-1 phase is rejected, its gradient is not") {
  const auto m = bare_radial(1.0);
  const TangentPoint p(kOmega, kYhat * 3.0);
  CHECK_THROWS_AS(phase_integral(m, p), DomainError);
  const auto v = evaluate_phase(m, p);
  CHECK(std::isinf(v.est_error));
  CHECK(rel(v.grad, kYhat * (-2.0 / 3.0)) <= 1e-12);
}

TEST_CASE("bare gradient at y = 0 is rejected") {
  CHECK_THROWS_AS(grad_phase(fixtures::p1(), TangentPoint(kOmega, Vec{0.0, 0.0, 0.0})), DomainError);
  CHECK_THROWS_AS(grad_phase_term(fixtures::p1().terms()[0], TangentPoint(kOmega, Vec{0.0, 0.0, 0.0})), DomainError);
}

TEST_CASE("cutoff shifts the phase by a y-independent constant") {
  const auto bare = fixtures::p1(PotentialMode::bare);
  const auto cut = fixtures::p1(PotentialMode::cutoff);
  const TangentPoint a(kOmega, kYhat * 5.0);
  const TangentPoint b(kOmega, normalized(Vec{-3.0, 1.0, 0.0}) * 17.0);
  const double da = phase_integral(cut, a).value - phase_integral(bare, a).value;
  const double db = phase_integral(cut, b).value - phase_integral(bare, b).value;
  CHECK(std::abs(da - db) <= 1e-9);
  CHECK(std::abs(da) > 1e-3);
}

TEST_CASE("bare radial gradient closed form and cross identity") {
  for (double rho : {0.6, 0.75, 0.9, 1.0}) {
    const double b = oracle::b_quadrature(rho);
    const auto m = bare_radial(rho);
    for (double r : {1.0, 10.0, 100.0}) {
      const Vec g = grad_phase(m, TangentPoint(kOmega, kYhat * r));
      CHECK(rel(g, kYhat * (-rho * b * std::pow(r, -rho))) <= 1e-10);
    }
    if (rho < 1.0) CHECK(rel((1.0 - rho) * oracle::c_quadrature(rho), -rho * b) <= 1e-12);
  }
}

TEST_CASE("axial term gradient against a line-integral oracle") {
  const auto term = fixtures::p2().terms()[0];
  oracle::Gen gen(3);
  for (int k = 0; k < 5; ++k) {
    const Vec w = gen.unit(3);
    const Vec y = gen.unit_orthogonal(w) * gen.log_uniform(0.5, 50.0);
    const Vec expected = oracle::line_gradient([&](const Vec& x) { return term.grad(x); }, y, w);
    CHECK(rel(grad_phase_term(term, TangentPoint(Direction(w), y)), expected) <= 1e-9);
  }
}

TEST_CASE("gradient is tangent") {
  oracle::Gen gen(19);
  for (const auto& m : {fixtures::p1(), fixtures::p2(), fixtures::p3()}) {
    for (int k = 0; k < 10; ++k) {
      const Vec w = gen.unit(3);
      const Vec y = gen.unit_orthogonal(w) * gen.log_uniform(1.0, 100.0);
      const Vec g = grad_phase(m, TangentPoint(Direction(w), y));
      CHECK(std::abs(dot(g, w)) <= 1e-10 * norm(g));
    }
  }
}

TEST_CASE("single-term gradient homogeneity, symmetry and additivity") {
  oracle::Gen gen(23);
  const auto p3 = fixtures::p3(PotentialMode::bare);
  for (int k = 0; k < 5; ++k) {
    const Vec w = gen.unit(3);
    const Vec y = gen.unit_orthogonal(w) * gen.log_uniform(1.0, 20.0);
    const TangentPoint p(Direction(w), y);
    for (const auto& term : p3.terms()) {
      const Vec g = grad_phase_term(term, p);
      const Vec g7 = grad_phase_term(term, TangentPoint(Direction(w), y * 7.0));
      CHECK(rel(g7, g * std::pow(7.0, -term.rho)) <= 1e-8);
    }
    const Vec radial = grad_phase_term(p3.terms()[1], p);
    CHECK(rel(normalized(radial), normalized(y) * -1.0) <= 1e-12);

    const PotentialModel sr_only(3, {}, p3.short_range());
    const Vec sum = grad_phase_term(p3.terms()[0], p) + grad_phase_term(p3.terms()[1], p) + grad_phase(sr_only, p);
    CHECK(rel(grad_phase(p3, p), sum) <= 1e-8);
  }
}

TEST_CASE("phase homogeneity under dilation") {
  oracle::Gen gen(29);
  const Vec w = gen.unit(3);
  const Vec y = gen.unit_orthogonal(w) * 3.0;
  for (const auto& m : {fixtures::p1(), fixtures::p2()}) {
    const double rho = m.terms()[0].rho;
    const auto base = evaluate_phase(m, TangentPoint(Direction(w), y));
    for (double s : {0.5, 2.0, 7.0}) {
      const auto sc = evaluate_phase(m, TangentPoint(Direction(w), y * s));
      CHECK(std::abs(sc.value - std::pow(s, 1.0 - rho) * base.value) <= 1e-6 * std::abs(base.value));
      CHECK(norm(sc.grad - base.grad * std::pow(s, -rho)) <= 1e-6 * norm(base.grad));
    }
  }
}

TEST_CASE("gradient matches differences of the phase") {
  oracle::Gen gen(31);
  const auto m = fixtures::p3();
  for (double r : {1.0, 10.0, 100.0}) {
    const Vec w = gen.unit(3);
    const Vec y = gen.unit_orthogonal(w) * r;
    const Vec e = gen.unit_orthogonal(w);
    const double h = 1e-3 * r;
    const double fd = (phase_integral(m, TangentPoint(Direction(w), y + e * h)).value -
                       phase_integral(m, TangentPoint(Direction(w), y - e * h)).value) /
                      (2.0 * h);
    const Vec g = grad_phase(m, TangentPoint(Direction(w), y));
    CHECK(std::abs(dot(g, e) - fd) <= 1e-6 * norm(g));
  }
}

TEST_CASE("gradient does not depend on the cutoff outside R0") {
  oracle::Gen gen(37);
  for (int k = 0; k < 10; ++k) {
    const Vec w = gen.unit(3);
    const Vec y = gen.unit_orthogonal(w) * gen.log_uniform(1.01, 100.0);
    const TangentPoint p(Direction(w), y);
    CHECK(rel(grad_phase(fixtures::p3(PotentialMode::cutoff), p), grad_phase(fixtures::p3(PotentialMode::bare), p)) <=
          1e-8);
  }
}

TEST_CASE("theta_pm") {
  const ShortRangeTerm sr{2.0, 1.0};  // (1 + |x|^2)^{-1}
  const Vec xi = normalized(Vec{1.0, 1.0, 1.0});
  CHECK(theta_pm(sr, xi, +1) == doctest::Approx(std::numbers::pi / 4.0).epsilon(1e-10));
  // The minus branch integrates towards -infinity, so an even V_sr gives theta_- = -theta_+.
  CHECK(theta_pm(sr, xi, -1) == doctest::Approx(-theta_pm(sr, xi, +1)).epsilon(1e-12));
  CHECK(theta_pm(sr, xi * 2.0, +1) == doctest::Approx(theta_pm(sr, xi, +1) / 2.0).epsilon(1e-10));
  // rho_sr = 3: (1/2) int_0^inf (1 + s^2)^{-3/2} ds = 1/2.
  CHECK(theta_pm(ShortRangeTerm{3.0, 1.0}, xi, +1) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK_THROWS_AS(theta_pm(sr, Vec{0.0, 0.0, 0.0}, +1), DomainError);
}

TEST_CASE("gauge shift") {
  const auto model = fixtures::p3();
  const TangentPoint p(kOmega, kYhat * 4.0);
  const auto phi = evaluate_phase(model, p);
  const auto gauge = GaugePhase::from_short_range(*model.short_range());
  const double k = 1.3;
  const auto shifted = gauge_shifted_phase(phi, gauge, k, kOmega);
  for (int i = 0; i < 3; ++i) CHECK(shifted.grad[i] == phi.grad[i]);
  // shift = 2k (theta_+ - theta_-) = 4k theta_+(k omega) = 4k pi / (4k).
  CHECK(shifted.value - phi.value == doctest::Approx(std::numbers::pi).epsilon(1e-10));

  const auto none = gauge_shifted_phase(phi, GaugePhase::none(), k, kOmega);
  CHECK(none.value == phi.value);

  const GaugePhase symmetric{[](const Vec& v) { return 1.0 / norm(v); }, [](const Vec& v) { return 1.0 / norm(v); }};
  CHECK(gauge_shifted_phase(phi, symmetric, k, kOmega).value == phi.value);
}
