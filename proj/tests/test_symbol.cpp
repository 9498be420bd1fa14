#include <doctest.h>

#include <cmath>
#include <complex>

#include "lrisp/errors.hpp"
#include "lrisp/separation.hpp"
#include "lrisp/symbol.hpp"
#include "oracles.hpp"

using namespace lrisp;
using cd = std::complex<double>;

namespace {

const Direction kOmega(Vec{0.0, 0.0, 1.0});
const Vec kYhat = normalized(Vec{2.0, -1.0, 0.0});

SymbolOracle oracle_for(const PotentialModel& m, double eps, std::uint64_t seed = 1, bool gauge = false) {
  std::optional<GaugePhase> g;
  if (gauge) g = GaugePhase::from_short_range(*m.short_range());
  return make_synthetic_oracle(m, Energy(1.0), PerturbationSpec{eps, std::nullopt, seed}, g);
}

}  // namespace

TEST_CASE("energy") {
  for (double lambda : {1e-3, 0.5, 1.0, 2.0, 1e4}) {
    const Energy e(lambda);
    CHECK(std::abs(e.k() * e.k() - lambda) <= 1e-14 * lambda);
  }
  CHECK_THROWS_AS(Energy(0.0), DomainError);
  CHECK_THROWS_AS(Energy(-1.0), DomainError);
}

TEST_CASE("principal symbol") {
  const double pi = std::numbers::pi;
  for (double lambda : {0.25, 1.0, 9.0}) {
    const Energy e(lambda);
    const double k = e.k();
    CHECK(std::abs(principal_symbol(0.0, e) - cd(1.0, 0.0)) == 0.0);
    CHECK(std::abs(principal_symbol(4.0 * pi * k, e) - cd(1.0, 0.0)) <= 1e-14);
    CHECK(std::abs(principal_symbol(pi * k, e) - cd(0.0, -1.0)) <= 1e-15);
    CHECK(std::abs(std::abs(principal_symbol(123.456, e)) - 1.0) <= 1e-15);
  }
}

TEST_CASE("unperturbed oracle has unit modulus") {
  const auto o = oracle_for(fixtures::p3(), 0.0);
  oracle::Gen gen(41);
  for (int k = 0; k < 20; ++k) {
    const Vec w = gen.unit(3);
    const TangentPoint p(Direction(w), gen.unit_orthogonal(w) * gen.log_uniform(0.1, 1e3));
    CHECK(std::abs(std::abs(o.sample(p)) - 1.0) <= 1e-12);
  }
}

TEST_CASE("perturbed oracle stays inside the remainder envelope") {
  // P2: rho_1 = 0.6, so the default decay order is 2 * 0.6 - 1 = 0.2.
  const auto o = oracle_for(fixtures::p2(), 0.1, 9);
  const TangentPoint p(kOmega, kYhat * 100.0);
  CHECK(std::abs(std::abs(o.sample(p)) - 1.0) <= 0.1 * std::pow(101.0, -0.2));

  const auto& b = o.remainder();
  oracle::Gen gen(43);
  double max_ratio = 0.0, max_grad_ratio = 0.0;
  for (int k = 0; k < 200; ++k) {
    const Vec w = gen.unit(3);
    const Vec e = gen.unit_orthogonal(w);
    const double r = gen.log_uniform(0.01, 1e4);
    const Vec y = gen.unit_orthogonal(w) * r;
    const double env = 0.1 * std::pow(1.0 + r, -0.2);
    max_ratio = std::max(max_ratio, std::abs(b(y, w)) / env);
    const double h = 1e-4 * std::max(1.0, r);
    const double db = std::abs((b(y + e * h, w) - b(y - e * h, w)) / (2.0 * h));
    max_grad_ratio = std::max(max_grad_ratio, db / (env / (1.0 + r)));
  }
  CHECK(max_ratio <= 1.0);
  CHECK(max_grad_ratio <= 10.0);
}

TEST_CASE("remainder is reproducible per seed") {
  const auto a = oracle_for(fixtures::p1(), 0.05, 77);
  const auto b = oracle_for(fixtures::p1(), 0.05, 77);
  const auto c = oracle_for(fixtures::p1(), 0.05, 78);
  const TangentPoint p(kOmega, kYhat * 12.5);
  CHECK(a.sample(p) == b.sample(p));
  CHECK(a.sample(p) != c.sample(p));
}

TEST_CASE("localized oracle") {
  const auto global = oracle_for(fixtures::p3(), 0.05, 3);
  const Direction w0(Vec{1.0, 1.0, 0.0});
  const auto local = localized_oracle(global, w0, 0.2);
  const TangentPoint center(w0, Vec{0.0, 0.0, 5.0});
  CHECK(local.sample(center) == global.sample(center));

  const Direction inside(Vec{1.0, 1.15, 0.0});
  CHECK(geodesic_distance(inside, w0) < 0.2);
  const TangentPoint pin(inside, Vec{0.0, 0.0, 3.0});
  CHECK(local.sample(pin) == global.sample(pin));

  const Direction outside(Vec{1.0, 1.6, 0.0});
  CHECK(geodesic_distance(outside, w0) > 0.2);
  CHECK_THROWS_AS(local.sample(TangentPoint(outside, Vec{0.0, 0.0, 3.0})), OutOfDomainError);
  CHECK_FALSE(local.contains(outside));

  CHECK_THROWS_AS(localized_oracle(global, w0, 0.0), DomainError);
  CHECK_THROWS_AS(localized_oracle(global, w0, 1.0), DomainError);
}

TEST_CASE("caps covering a circle") {
  const Vec f1{1.0, 0.0, 0.0}, f2{0.0, 0.0, 1.0};
  for (double r : {0.1, 0.2, 0.5}) {
    const auto caps = caps_covering_circle(f1, f2, r);
    CHECK(caps.size() == static_cast<std::size_t>(std::ceil(std::numbers::pi / r)));
    for (int i = 0; i < 1000; ++i) {
      const double t = 2.0 * std::numbers::pi * i / 1000.0;
      const Direction w(f1 * std::cos(t) + f2 * std::sin(t));
      bool covered = false;
      for (const auto& c : caps) covered = covered || c.contains(w);
      CHECK(covered);
    }
  }
}

TEST_CASE("extraction matches the forward gradient without perturbation") {
  const auto m = fixtures::p1();
  const auto o = oracle_for(m, 0.0);
  for (double r : {1.0, 3.0, 10.0, 30.0, 100.0}) {
    const TangentPoint p(kOmega, kYhat * r);
    const Vec g = grad_phase(m, p);
    CHECK(norm(extract_grad_phase(o, p, 1e-4) - g) <= 1e-6 * norm(g));
  }
}

TEST_CASE("zero potential extracts a zero gradient") {
  const auto o = oracle_for(fixtures::zero(), 0.0);
  const Vec g = extract_grad_phase(o, TangentPoint(kOmega, kYhat * 7.0));
  CHECK(norm(g) == 0.0);
}

TEST_CASE("stencil convergence order") {
  const auto m = fixtures::p2();
  const auto o = oracle_for(m, 0.0);
  const TangentPoint p(kOmega, kYhat * 2.0);
  const double exact = dot(grad_phase(m, p), kYhat);
  const auto err = [&](double h, int order) { return std::abs(extract_directional(o, p, kYhat, h, order) - exact); };
  const double r2 = err(2e-2, 2) / err(1e-2, 2);
  CHECK(r2 == doctest::Approx(4.0).epsilon(0.1));
  const double r4 = err(8e-2, 4) / err(4e-2, 4);
  CHECK(r4 == doctest::Approx(16.0).epsilon(0.15));
  CHECK_THROWS_AS(extract_directional(o, p, kYhat, 1e-3, 3), DomainError);
}

TEST_CASE("extraction error envelope under perturbation") {
  // |extract - grad Phi| (1 + |y|)^{2 rho_1} stays bounded; rho_1 = 0.6 for P3.
  const auto m = fixtures::p3();
  const auto o = oracle_for(m, 0.05, 5);
  double low = 0.0, high = 0.0;
  for (int i = 0; i <= 20; ++i) {
    const double r = 10.0 * std::pow(100.0, i / 20.0);
    const TangentPoint p(kOmega, kYhat * r);
    const double scaled = norm(extract_grad_phase(o, p) - grad_phase(m, p)) * std::pow(1.0 + r, 1.2);
    (i <= 10 ? low : high) = std::max(i <= 10 ? low : high, scaled);
  }
  CHECK(low > 0.0);
  CHECK(high <= 3.0 * low);
}

TEST_CASE("gauge covariance of extraction") {
  const auto m = fixtures::p3();
  const auto plain = oracle_for(m, 0.05, 11, false);
  const auto gauged = oracle_for(m, 0.05, 11, true);
  oracle::Gen gen(47);
  for (int k = 0; k < 10; ++k) {
    const Vec w = gen.unit(3);
    const TangentPoint p(Direction(w), gen.unit_orthogonal(w) * gen.log_uniform(1.0, 1e3));
    CHECK(plain.sample(p) != gauged.sample(p));
    const Vec a = extract_grad_phase(plain, p), b = extract_grad_phase(gauged, p);
    CHECK(norm(a - b) <= 1e-10 * std::max(norm(a), 1e-300));
  }
}
