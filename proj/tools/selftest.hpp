#pragma once

#include <string>
#include <vector>

namespace lrisp::selftest {

struct Check {
  std::string name;
  double computed = 0.0;
  double expected = 0.0;
  double rel_error = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

/// C(rho) = 2 int_0^inf [(1 + t^2)^{-rho/2} - t^{-rho}] dt by Boost quadrature.
double c_coefficient(double rho);
/// B(rho) = int_R (1 + t^2)^{-(rho+2)/2} dt by Boost quadrature.
double b_coefficient(double rho);

/// Closed-form phase and gradient of bare radial terms, the identity
/// (1 - rho) C = -rho B, and the Gaussian Radon inversion.
std::vector<Check> run_all();

}  // namespace lrisp::selftest
