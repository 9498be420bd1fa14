#include <doctest.h>

#include <cmath>
#include <functional>

#include <Eigen/Dense>

#include "lrisp/errors.hpp"
#include "lrisp/separation.hpp"
#include "oracles.hpp"

using namespace lrisp;

namespace {

const Direction kOmega(Vec{0.0, 0.0, 1.0});
const Vec kU = normalized(Vec{1.0, 0.3, 0.0});

RaySamples synthetic(const std::vector<double>& radii, const std::function<double(double)>& g) {
  RaySamples s{kOmega, kU, kU, radii, {}};
  for (double r : radii) s.values.push_back(g(r));
  return s;
}

std::vector<double> geometric(double s_min, double q, double s_max) {
  std::vector<double> r;
  for (double s = s_min; s <= s_max * (1.0 + 1e-12); s *= q) r.push_back(s);
  return r;
}

/// Weighted least squares by Householder QR, the weights of fit_known_exponents.
std::vector<double> qr_oracle(const RaySamples& s, const std::vector<double>& exps) {
  const double wexp = *std::min_element(exps.begin(), exps.end());
  Eigen::MatrixXd a(s.radii.size(), exps.size());
  Eigen::VectorXd b(s.radii.size());
  for (std::size_t i = 0; i < s.radii.size(); ++i) {
    const double w = std::pow(s.radii[i], wexp);
    for (std::size_t j = 0; j < exps.size(); ++j) a(i, j) = w * std::pow(s.radii[i], -exps[j]);
    b(i) = w * s.values[i];
  }
  const Eigen::VectorXd x = a.colPivHouseholderQr().solve(b);
  return {x.data(), x.data() + x.size()};
}

}  // namespace

TEST_CASE("ray sampling of the forward gradient") {
  const auto m = fixtures::p1();
  const RayGrid grid{10.0, 1e4, 16};
  const auto s = sample_ray(model_gradient_source(m), kOmega, kU, kU, grid);
  const double b = oracle::b_quadrature(0.75);
  REQUIRE(s.radii.size() == 16);
  CHECK(s.radii.front() == doctest::Approx(10.0));
  CHECK(s.radii.back() == doctest::Approx(1e4));
  for (std::size_t i = 0; i < s.radii.size(); ++i) {
    CHECK(s.values[i] == doctest::Approx(-0.75 * b * std::pow(s.radii[i], -0.75)).epsilon(1e-10));
  }

  const auto zero = sample_ray(model_gradient_source(fixtures::zero()), kOmega, kU, kU, grid);
  for (double v : zero.values) CHECK(v == 0.0);

  const Vec e = normalized(Vec{-0.3, 1.0, 0.0});
  const auto perp = sample_ray(model_gradient_source(m), kOmega, kU, e, grid);
  for (std::size_t i = 0; i < perp.radii.size(); ++i)
    CHECK(std::abs(perp.values[i]) <= 1e-14 * std::abs(s.values[i]));

  CHECK_THROWS_AS(sample_ray(model_gradient_source(m), kOmega, Vec{0.0, 0.0, 1.0}, kU, grid), DomainError);
}

TEST_CASE("fit with known exponents") {
  const auto radii = geometric(10.0, std::pow(1e3, 1.0 / 63.0), 1e4);
  const std::vector<double> exps{0.6, 1.0};

  const auto exact = synthetic(radii, [](double s) { return 2.0 * std::pow(s, -0.6) - std::pow(s, -1.0); });
  const auto f = fit_known_exponents(exact, exps);
  CHECK(f.coeffs[0] == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(f.coeffs[1] == doctest::Approx(-1.0).epsilon(1e-10));
  CHECK(f.residual <= 1e-12);

  const auto dirty = synthetic(
      radii, [](double s) { return 2.0 * std::pow(s, -0.6) - std::pow(s, -1.0) + 0.01 * std::pow(s, -1.4); });
  const auto g = fit_known_exponents(dirty, exps);
  const auto qr = qr_oracle(dirty, exps);
  CHECK(g.coeffs[0] == doctest::Approx(qr[0]).epsilon(1e-9));
  CHECK(g.coeffs[1] == doctest::Approx(qr[1]).epsilon(1e-9));
  CHECK(std::abs(g.coeffs[0] / 2.0 - 1.0) <= 1e-2);
  CHECK(std::abs(g.coeffs[1] / -1.0 - 1.0) <= 1e-2);
  CHECK(g.residual <= 0.01 * std::pow(10.0, -1.4));
  CHECK(g.std_errors.size() == 2);

  const auto p1 = sample_ray(model_gradient_source(fixtures::p1()), kOmega, kU, kU, RayGrid{});
  const double expected = -0.75 * oracle::b_quadrature(0.75);
  CHECK(fit_known_exponents(p1, std::vector<double>{0.75}).coeffs[0] == doctest::Approx(expected).epsilon(1e-6));
}

TEST_CASE("near-identical exponents raise a conditioning error") {
  const auto radii = geometric(10.0, 1.5, 1e4);
  const auto s = synthetic(radii, [](double r) { return std::pow(r, -0.7); });
  try {
    fit_known_exponents(s, std::vector<double>{0.7, 0.7 + 1e-8}, 1e6);
    FAIL("expected ConditioningError");
  } catch (const ConditioningError& e) {
    CHECK(e.condition_number > 1e6);
  }
  CHECK_NOTHROW(fit_known_exponents(s, std::vector<double>{0.7, 0.9}, 1e6));
}

TEST_CASE("detection on fixture rays") {
  const auto p1 = sample_ray(oracle_gradient_source(make_synthetic_oracle(fixtures::p1(), Energy(1.0), {})), kOmega,
                             kU, kU, RayGrid{});
  const auto d1 = detect_exponents(p1);
  REQUIRE(d1.size() == 1);
  CHECK(std::abs(d1.exponents[0] - 0.75) <= 0.01);

  const Vec u = normalized(Vec{1.0, -2.0, 0.5});
  const Direction w(Vec{2.0, 1.0, 0.0});
  const Vec uu = normalized(u - w.vec() * dot(u, w.vec()));
  const auto oracle = make_synthetic_oracle(fixtures::p3(), Energy(1.0), {});
  const auto p3 = sample_ray(oracle_gradient_source(oracle), w, uu, uu, RayGrid{});
  const auto d3 = detect_exponents(p3);
  REQUIRE(d3.size() == 2);
  CHECK(std::abs(d3.exponents[0] - 0.6) <= 0.02);
  CHECK(std::abs(d3.exponents[1] - 1.0) <= 0.02);
  CHECK(d3.remainder_slope <= -1.05);
}

TEST_CASE("empty and out-of-class inputs") {
  const auto radii = geometric(10.0, 1.2, 1e4);
  const auto zero = detect_exponents(synthetic(radii, [](double) { return 0.0; }));
  CHECK(zero.size() == 0);
  CHECK(zero.coefficients.empty());

  const auto tiny = detect_exponents(synthetic(radii, [](double s) { return 1e-16 * std::pow(s, -0.7); }));
  CHECK(tiny.size() == 0);

  CHECK_THROWS_AS(detect_exponents(synthetic(radii, [](double s) { return std::pow(s, -0.3); })), ModelClassError);

  const auto steep = detect_exponents(synthetic(radii, [](double s) { return std::pow(s, -1.5); }));
  CHECK(steep.size() == 0);
  REQUIRE(steep.remainder_exponents.size() == 1);
  CHECK(steep.remainder_exponents[0] == doctest::Approx(1.5).epsilon(1e-6));
}

TEST_CASE("evaluate_component") {
  const auto radii = geometric(10.0, 1.2, 1e4);
  const auto d = detect_exponents(synthetic(radii, [](double s) { return 3.0 * std::pow(s, -0.8); }));
  REQUIRE(d.size() == 1);
  CHECK(evaluate_component(d, 0, 1.0) == doctest::Approx(d.coefficients[0]).epsilon(1e-15));
  CHECK(evaluate_component(d, 0, 2.0 * 37.0) ==
        doctest::Approx(std::pow(2.0, -d.exponents[0]) * evaluate_component(d, 0, 37.0)).epsilon(1e-14));
  CHECK(evaluate_component(d, 0, 100.0) == doctest::Approx(3.0 * std::pow(100.0, -0.8)).epsilon(1e-8));
  CHECK_THROWS(evaluate_component(d, 1, 1.0));
  CHECK_THROWS(evaluate_component(d, 0, 0.0));
}

TEST_CASE("recovery property over random two-term inputs") {
  oracle::Gen gen(101);
  const auto radii = geometric(10.0, std::pow(1e3, 1.0 / 63.0), 1e4);
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const double r1 = gen.uniform(0.55, 0.85);
    const double r2 = gen.uniform(r1 + 0.1, 1.0);
    const double c1 = (gen.uniform(0.0, 1.0) < 0.5 ? -1.0 : 1.0) * gen.log_uniform(0.5, 2.0);
    const double c2 = (gen.uniform(0.0, 1.0) < 0.5 ? -1.0 : 1.0) * gen.log_uniform(0.5, 2.0);
    const double eps = gen.uniform(-0.1, 0.1) * std::min(std::abs(c1), std::abs(c2));
    const double p = gen.uniform(1.2, 2.0);
    const auto s = synthetic(radii, [&](double x) {
      return c1 * std::pow(x, -r1) + c2 * std::pow(x, -r2) + eps * std::pow(x, -p);
    });
    const auto d = detect_exponents(s);
    CAPTURE(trial);
    CAPTURE(r1);
    CAPTURE(r2);
    CAPTURE(p);
    REQUIRE(d.size() == 2);
    CHECK(std::abs(d.exponents[0] - r1) <= 0.02);
    CHECK(std::abs(d.exponents[1] - r2) <= 0.02);
    CHECK(std::abs(d.coefficients[0] / c1 - 1.0) <= 0.01);
    CHECK(std::abs(d.coefficients[1] / c2 - 1.0) <= 0.01);
    ++checked;
  }
  CHECK(checked == 60);
}

TEST_CASE("detection does not depend on the grid ratio") {
  const auto g = [](double s) { return 1.3 * std::pow(s, -0.65) + 0.7 * std::pow(s, -0.9) + 0.05 * std::pow(s, -1.5); };
  const auto a = detect_exponents(synthetic(geometric(10.0, 1.2, 1e4), g));
  const auto b = detect_exponents(synthetic(geometric(10.0, 1.5, 1e4), g));
  REQUIRE(a.size() == 2);
  REQUIRE(b.size() == 2);
  for (std::size_t j = 0; j < 2; ++j) {
    CHECK(std::abs(a.exponents[j] - b.exponents[j]) <= 0.02);
    CHECK(std::abs(a.coefficients[j] / b.coefficients[j] - 1.0) <= 0.01);
  }
}

TEST_CASE("detection is idempotent on its own model") {
  const auto radii = geometric(10.0, 1.2, 1e4);
  const auto d = detect_exponents(synthetic(radii, [](double s) {
    return -0.8 * std::pow(s, -0.62) + 0.4 * std::pow(s, -0.97) + 0.03 * std::pow(s, -1.3);
  }));
  REQUIRE(d.size() == 2);
  const auto again = detect_exponents(synthetic(radii, [&](double s) {
    return evaluate_component(d, 0, s) + evaluate_component(d, 1, s);
  }));
  REQUIRE(again.size() == 2);
  CHECK(std::abs(again.exponents[0] - d.exponents[0]) <= 1e-6);
  CHECK(std::abs(again.exponents[1] - d.exponents[1]) <= 1e-6);
}

TEST_CASE("tail slope extrapolation") {
  const auto radii = geometric(10.0, 1.2, 1e4);
  std::vector<double> v;
  for (double r : radii) v.push_back(2.0 * std::pow(r, -0.7));
  CHECK(extrapolated_tail_slope(radii, v) == doctest::Approx(-0.7).epsilon(1e-9));
  v.clear();
  for (double r : radii) v.push_back(std::pow(r, -0.7) + 5.0 * std::pow(r, -1.2));
  CHECK(std::abs(extrapolated_tail_slope(radii, v) + 0.7) <= 0.01);
}

TEST_CASE("consensus over rays") {
  const auto make = [](std::vector<double> e, std::vector<double> rem) {
    HomogeneousDecomposition d;
    d.exponents = std::move(e);
    d.coefficients.assign(d.exponents.size(), 1.0);
    d.remainder_exponents = std::move(rem);
    d.remainder_slope = -1.2;
    return d;
  };
  const std::vector<HomogeneousDecomposition> rays{make({0.60, 1.0}, {1.2}), make({0.61, 1.0}, {1.2}),
                                                   make({0.59, 1.0}, {1.21}), make({0.60}, {}),
                                                   make({0.62, 0.99}, {1.19})};
  const auto c = consensus_exponents(rays);
  REQUIRE(c.exponents.size() == 2);
  CHECK(c.exponents[0] == doctest::Approx(0.60));
  CHECK(c.exponents[1] == doctest::Approx(1.0));
  CHECK(c.exponent_spread[0] == doctest::Approx(0.02));
  REQUIRE(c.remainder_exponents.size() == 1);
  CHECK(c.remainder_exponents[0] == doctest::Approx(1.2));

  // A component seen on a single ray out of eight is not supported.
  std::vector<HomogeneousDecomposition> eight(7, make({0.7}, {}));
  eight.push_back(make({0.7, 0.9}, {}));
  const auto c8 = consensus_exponents(eight);
  REQUIRE(c8.exponents.size() == 1);
  CHECK(c8.exponents[0] == doctest::Approx(0.7));

  CHECK(consensus_exponents({make({}, {}), make({}, {})}).exponents.empty());
}
