#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "lrisp/phase.hpp"

namespace lrisp {

/// Fixed energy lambda > 0 and momentum k = sqrt(lambda).
class Energy {
public:
  explicit Energy(double lambda);
  double lambda() const { return lambda_; }
  double k() const { return k_; }

private:
  double lambda_;
  double k_;
};

/// exp(-i phi / (2k)).
std::complex<double> principal_symbol(double phi, const Energy& energy);

struct PerturbationSpec {
  double eps = 0.0;
  /// Decay order of the remainder; defaults to 2 rho_1 - 1 (1 without
  /// long-range terms).
  std::optional<double> p_b;
  std::uint64_t seed = 0;
};

/// Smooth complex remainder b(y, omega) with |b| <= eps (1+|y|)^{-p_b}:
///   b = eps 2^{-p_b/2} (1+|y|^2)^{-p_b/2} A(w, omega),  w = y / sqrt(1+|y|^2),
/// where A is a trigonometric sum with seeded coefficients normalized so
/// that sup |A| <= 1. The coefficients are drawn once; each query is a pure
/// function of (y, omega).
class SyntheticRemainder {
public:
  SyntheticRemainder(int dim, double eps, double p_b, std::uint64_t seed);

  std::complex<double> operator()(const Vec& y, const Vec& omega) const;
  double eps() const { return eps_; }
  double p_b() const { return p_b_; }
  /// eps (1+|y|)^{-p_b}.
  double envelope(double ynorm) const;

  static constexpr int kModes = 6;
  static constexpr double kSpatialFrequency = 2.0;

private:
  struct Mode {
    std::complex<double> c;
    Vec m, n;
  };
  double eps_;
  double p_b_;
  std::vector<Mode> modes_;
  double norm_ = 1.0;
};

/// Geodesic cap {omega : dist(omega, center) <= radius} on the sphere.
struct Cap {
  Direction center;
  double radius;
  bool contains(const Direction& w) const { return geodesic_distance(w, center) <= radius; }
};

/// Sampler of the scattering-matrix symbol
///   a(y, omega) = exp(-i Phi~(y, omega) / (2k)) (1 + b(y, omega)),
/// with Phi~ the (optionally gauge-shifted) phase of a potential model and b
/// a synthetic remainder. Access may be restricted to unions of caps.
class SymbolOracle {
public:
  SymbolOracle(std::shared_ptr<const PotentialModel> model, Energy energy, const PerturbationSpec& pert,
               std::optional<GaugePhase> gauge = std::nullopt, PhaseOptions phase_opt = {});

  std::complex<double> sample(const TangentPoint& p) const;
  bool contains(const Direction& omega) const;

  const Energy& energy() const { return src_->energy; }
  const PotentialModel& model() const { return *src_->model; }
  const SyntheticRemainder& remainder() const { return src_->remainder; }
  bool gauged() const { return src_->gauge.has_value(); }

  /// Copy whose domain is additionally restricted to the union of `caps`.
  SymbolOracle restricted(std::vector<Cap> caps) const;

private:
  struct Source {
    std::shared_ptr<const PotentialModel> model;
    Energy energy;
    SyntheticRemainder remainder;
    std::optional<GaugePhase> gauge;
    PhaseOptions phase_opt;
  };
  std::shared_ptr<const Source> src_;
  std::vector<std::vector<Cap>> restrictions_;
};

SymbolOracle make_synthetic_oracle(const PotentialModel& model, const Energy& energy, const PerturbationSpec& pert,
                                   std::optional<GaugePhase> gauge = std::nullopt, PhaseOptions phase_opt = {});

/// Oracle restricted to the cap of `cap_radius` (0 < r <= pi/4) around omega0.
SymbolOracle localized_oracle(const SymbolOracle& oracle, const Direction& omega0, double cap_radius);

/// Fewest caps of the given radius, centred on the great circle spanned by
/// the orthonormal pair (f1, f2), whose union covers that circle.
std::vector<Cap> caps_covering_circle(const Vec& f1, const Vec& f2, double cap_radius);

inline constexpr double kDefaultStencil = 1e-4;

/// <grad Phi, e> recovered from symbol samples as Re(i 2k d_e a / a), with
/// d_e a / a = d_e log a taken by a central difference (order 2 or 4) of
/// step h max(1, |y|).
double extract_directional(const SymbolOracle& oracle, const TangentPoint& p, const Vec& e,
                           double h = kDefaultStencil, int order = 2);

/// Full tangential gradient by extract_directional along an orthonormal
/// basis of the hyperplane orthogonal to omega.
Vec extract_grad_phase(const SymbolOracle& oracle, const TangentPoint& p, double h = kDefaultStencil,
                       int order = 2);

}  // namespace lrisp
