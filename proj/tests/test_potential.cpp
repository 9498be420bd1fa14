#include <doctest.h>

#include <cmath>

#include "lrisp/errors.hpp"
#include "lrisp/potential.hpp"
#include "oracles.hpp"

using namespace lrisp;

namespace {

double fd_directional(const PotentialModel& m, const Vec& x, const Vec& u, double h) {
  return (m.eval(x + u * h) - m.eval(x - u * h)) / (2.0 * h);
}

}  // namespace

TEST_CASE("fixture values") {
  const Vec x{2.0 / std::sqrt(3.0), 2.0 / std::sqrt(3.0), 2.0 / std::sqrt(3.0)};
  CHECK(fixtures::p1().eval(x) == doctest::Approx(std::pow(2.0, -0.75)).epsilon(1e-15));
  CHECK(fixtures::p1(PotentialMode::cutoff).eval(Vec{0.0, 0.0, 0.0}) == 0.0);

  // Independent evaluation of P2 at 2 e3: 2^{-0.6} (1 + 1/2 * 1^2).
  CHECK(fixtures::p2().eval(Vec{0.0, 0.0, 2.0}) == doctest::Approx(std::pow(2.0, -0.6) * 1.5).epsilon(1e-15));
  const Vec y{1.0, -2.0, 2.0};  // |y| = 3, <yhat, e3> = 2/3
  CHECK(fixtures::p2().eval(y) == doctest::Approx(std::pow(3.0, -0.6) * (1.0 + 0.5 * 4.0 / 9.0)).epsilon(1e-14));

  // P3 far from the cutoff: both terms and the short-range part.
  const double r = 3.0, t = 2.0 / 3.0;
  const double p3 = std::pow(r, -0.6) * (1.0 + 0.5 * t * t) + 0.5 / r + 1.0 / (1.0 + r * r);
  CHECK(fixtures::p3().eval(y) == doctest::Approx(p3).epsilon(1e-14));
  CHECK(fixtures::zero().eval(y) == 0.0);
}

TEST_CASE("bare model rejects the origin") {
  CHECK_THROWS_AS(fixtures::p1().eval(Vec{0.0, 0.0, 0.0}), DomainError);
  CHECK_THROWS_AS(fixtures::p1().grad(Vec{0.0, 0.0, 0.0}), DomainError);
}

TEST_CASE("construction invariants") {
  const auto term = [](double rho) { return HomogeneousTerm{rho, Profile::radial(), 1.0}; };
  CHECK_THROWS_AS(PotentialModel(3, {term(0.8), term(0.7)}, std::nullopt), DomainError);
  CHECK_THROWS_AS(PotentialModel(3, {term(0.8), term(0.8)}, std::nullopt), DomainError);
  CHECK_THROWS_AS(PotentialModel(3, {term(0.5)}, std::nullopt), DomainError);
  CHECK_THROWS_AS(PotentialModel(3, {term(1.1)}, std::nullopt), DomainError);
  CHECK_THROWS_AS(PotentialModel(2, {term(0.8)}, std::nullopt), DomainError);
  CHECK_THROWS_AS(PotentialModel(3, {}, ShortRangeTerm{1.0, 1.0}), DomainError);
  CHECK_NOTHROW(PotentialModel(3, {}, ShortRangeTerm{2.0, 1.0}));
  CHECK_NOTHROW(PotentialModel(4, {term(0.6), term(1.0)}, std::nullopt));
}

TEST_CASE("radial gradient closed form") {
  const auto m = fixtures::p1();
  const Vec x{0.3, -1.2, 2.0};
  const double r = norm(x);
  const Vec expected = x * (-0.75 * std::pow(r, -2.75));
  const Vec g = m.grad(x);
  for (int i = 0; i < 3; ++i) CHECK(g[i] == doctest::Approx(expected[i]).epsilon(1e-14));
}

TEST_CASE("gradient matches central differences") {
  oracle::Gen gen(11);
  for (const auto& m : {fixtures::p1(), fixtures::p2(), fixtures::p3(), fixtures::p3(PotentialMode::bare)}) {
    for (int k = 0; k < 20; ++k) {
      const Vec x = gen.unit(3) * gen.log_uniform(1.5, 50.0);
      const Vec u = gen.unit(3);
      const double fd = fd_directional(m, x, u, 1e-5);
      const Vec g = m.grad(x);
      CHECK(std::abs(dot(g, u) - fd) <= 1e-8 * norm(g));
    }
  }
}

TEST_CASE("central-difference order under h halving") {
  const auto m = fixtures::p2();
  const Vec x{1.1, 0.4, -0.9};
  const Vec u = normalized(Vec{1.0, 1.0, 1.0});
  const double exact = dot(m.grad(x), u);
  const double e1 = std::abs(fd_directional(m, x, u, 1e-2) - exact);
  const double e2 = std::abs(fd_directional(m, x, u, 5e-3) - exact);
  CHECK(std::log2(e1 / e2) >= 1.9);
}

TEST_CASE("cutoff region") {
  const auto m = fixtures::p1(PotentialMode::cutoff);
  for (double r : {0.0, 0.1, 0.3, 0.5}) {
    const Vec x = normalized(Vec{1.0, 2.0, 3.0}) * r;
    CHECK(m.eval(x) == 0.0);
    CHECK(norm(m.grad(x)) == 0.0);
  }
  // Smooth and finite in the switching shell.
  const Vec mid = normalized(Vec{1.0, 2.0, 3.0}) * 0.75;
  CHECK(std::isfinite(m.eval(mid)));
  CHECK(m.eval(mid) > 0.0);
  CHECK(m.eval(mid) < fixtures::p1().eval(mid));
}

TEST_CASE("cutoff and bare agree bit-exactly outside R0") {
  oracle::Gen gen(5);
  const auto bare = fixtures::p3(PotentialMode::bare);
  const auto cut = fixtures::p3(PotentialMode::cutoff);
  for (int k = 0; k < 200; ++k) {
    const Vec x = gen.unit(3) * gen.log_uniform(1.0, 1e4);
    CHECK(bare.eval(x) == cut.eval(x));
    const Vec gb = bare.grad(x), gc = cut.grad(x);
    for (int i = 0; i < 3; ++i) CHECK(gb[i] == gc[i]);
  }
}

TEST_CASE("homogeneity residual") {
  const auto p1 = fixtures::p1().terms()[0];
  const auto p2 = fixtures::p2().terms()[0];
  CHECK(verify_homogeneity(p1, Vec{0.2, 1.0, -0.7}, 3.0) <= 1e-14);
  CHECK(verify_homogeneity(p2, Vec{1.0, 0.0, 1.0}, 0.5) <= 1e-14);

  oracle::Gen gen(7);
  const auto p3 = fixtures::p3();
  for (const auto& term : p3.terms()) {
    for (int k = 0; k < 100; ++k) {
      const Vec x = gen.unit(3) * gen.log_uniform(1e-3, 1e3);
      CHECK(verify_homogeneity(term, x, gen.log_uniform(1e-3, 1e3)) <= 1e-12);
    }
  }
}

TEST_CASE("corrupted exponent is detected") {
  // V(x) = |x|^{-(0.75 + 1e-3)} checked against rho = 0.75: residual |10^{-1e-3} - 1|.
  auto corrupted = fixtures::p1().terms()[0];
  const Vec x = normalized(Vec{1.0, 1.0, 0.0});
  const double expected = std::abs(std::pow(10.0, -1e-3) - 1.0);
  corrupted.rho = 0.75 + 1e-3;
  const double v1 = corrupted.eval(x), v10 = corrupted.eval(x * 10.0);
  const double residual = std::abs(v10 - std::pow(10.0, -0.75) * v1) / std::abs(v1);
  CHECK(residual == doctest::Approx(std::pow(10.0, -0.75) * expected).epsilon(1e-9));
  corrupted.rho = 0.75;
  CHECK(verify_homogeneity(corrupted, x, 10.0) <= 1e-14);
}

TEST_CASE("short-range decay and derivative decay") {
  const ShortRangeTerm sr{2.0, 1.0};
  double bound = 0.0;
  for (double r = 1.0; r <= 1e4; r *= 1.5) {
    const Vec x = normalized(Vec{1.0, -1.0, 2.0}) * r;
    bound = std::max(bound, std::abs(sr.eval(x)) * std::pow(1.0 + r, 2.0));
    CHECK(norm(sr.grad(x)) * std::pow(1.0 + r, 3.0) <= 10.0);
  }
  CHECK(bound <= 4.0);
}

TEST_CASE("line difference without cancellation") {
  oracle::Gen gen(23);
  for (const auto& m : {fixtures::p1(), fixtures::p2(), fixtures::p3(), fixtures::p3(PotentialMode::bare)}) {
    for (int i = 0; i < 50; ++i) {
      const Vec w = gen.unit(3);
      const Vec y = gen.unit_orthogonal(w) * gen.log_uniform(0.1, 100.0);
      const double t = gen.log_uniform(0.5, 20.0) * norm(y);
      const double direct = m.eval(y + w * t) - m.eval(w * t);
      CHECK(std::abs(m.line_difference(y, w, t) - direct) <= 1e-12 * std::abs(m.eval(w * t)));
    }
  }
  // Radial rho = 1: V(y + t w) - V(t w) = -|y|^2 / (2 t^3) (1 + O(|y|^2 / t^2)).
  const PotentialModel radial(3, {HomogeneousTerm{1.0, Profile::radial(), 1.0}}, std::nullopt, 1.0,
                              PotentialMode::bare);
  const Vec w{0.0, 0.0, 1.0}, y{2.0, 0.0, 0.0};
  for (double t : {1e4, 1e6, 1e8}) {
    const double want = -0.5 * 4.0 / (t * t * t) * (1.0 - 0.75 * 4.0 / (t * t));
    CHECK(std::abs(radial.line_difference(y, w, t) - want) <= 1e-12 * std::abs(want));
  }
  // Axial profile with <y, axis> = 0: the difference is second order as well.
  // With u = 9 / t^2, a^2 = 1 / (2 (1 + u)) and the bracket
  // (1 + u)^{-0.3} (1 + a^2 / 2) - 5/4 = -0.625 u + 0.56875 u^2 + O(u^3).
  const auto p2 = fixtures::p2();
  const Vec w2 = normalized(Vec{1.0, 0.0, 1.0}), y2 = Vec{0.0, 3.0, 0.0};
  for (double t : {1e5, 1e7}) {
    const double u = 9.0 / (t * t);
    const double want = std::pow(t, -0.6) * (-0.625 * u + 0.56875 * u * u);
    CHECK(std::abs(p2.line_difference(y2, w2, t) - want) <= 1e-12 * std::abs(want));
  }
}
