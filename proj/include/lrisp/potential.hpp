#pragma once

#include <optional>
#include <vector>

#include "lrisp/vec.hpp"

namespace lrisp {

/// Angular factor of a homogeneous term, a polynomial in the components of
/// x/|x|. `radial` is the constant coeffs[0] (1 when empty); `axial` is
/// sum_k coeffs[k] <x/|x|, axis>^k.
struct Profile {
  enum class Kind { radial, axial };
  Kind kind = Kind::radial;
  std::optional<Vec> axis;  // unit; required for axial
  std::vector<double> coeffs;

  static Profile radial(double c = 1.0) { return {Kind::radial, std::nullopt, {c}}; }
  static Profile axial(const Vec& axis, std::vector<double> coeffs);

  /// Value and derivative of the polynomial in t = <xhat, axis>.
  double value(double t) const;
  double derivative(double t) const;
  /// (value(a) - value(b)) / (a - b), by synthetic division (finite as a -> b).
  double divided_difference(double a, double b) const;
  /// Profile evaluated at the unit vector `xhat`.
  double at(const Vec& xhat) const;
};

/// coupling * |x|^{-rho} * profile(x/|x|), homogeneous of order -rho.
struct HomogeneousTerm {
  double rho = 1.0;
  Profile profile = Profile::radial();
  double coupling = 1.0;

  double eval(const Vec& x) const;
  Vec grad(const Vec& x) const;
  /// eval(y + t w) - eval(t w) for unit w and t > 0, without cancellation
  /// at large t.
  double line_difference(const Vec& y, const Vec& w, double t) const;
};

/// g * (1 + |x|^2)^{-rho_sr/2}, rho_sr > 1.
struct ShortRangeTerm {
  double rho_sr = 2.0;
  double g = 1.0;

  double eval(const Vec& x) const;
  Vec grad(const Vec& x) const;
  double eval_radius(double r) const;
  /// eval(y + t w) - eval(t w) for unit w, without cancellation at large t.
  double line_difference(const Vec& y, const Vec& w, double t) const;
};

/// Smooth switch: 0 on [0, R0/2], 1 on [R0, inf), C^inf in between.
struct SmoothCutoff {
  double radius = 1.0;
  double value(double r) const;
  double derivative(double r) const;
};

enum class PotentialMode { bare, cutoff };

/// Sum of homogeneous long-range terms (strictly increasing orders in
/// (1/2, 1]) plus an optional short-range term. In cutoff mode every
/// homogeneous term is multiplied by the smooth switch, which makes the
/// model smooth at the origin and bit-identical to the bare model for
/// |x| >= R0.
class PotentialModel {
public:
  PotentialModel(int dim, std::vector<HomogeneousTerm> terms,
                 std::optional<ShortRangeTerm> short_range, double cutoff_radius = 1.0,
                 PotentialMode mode = PotentialMode::cutoff);

  int dim() const { return dim_; }
  const std::vector<HomogeneousTerm>& terms() const { return terms_; }
  const std::optional<ShortRangeTerm>& short_range() const { return short_range_; }
  double cutoff_radius() const { return cutoff_.radius; }
  PotentialMode mode() const { return mode_; }
  const SmoothCutoff& cutoff() const { return cutoff_; }

  double eval(const Vec& x) const;
  Vec grad(const Vec& x) const;
  /// V(y + t w) - V(t w) for unit w and t > 0. Accurate to rounding of the
  /// difference itself, also when it is many orders below V(t w).
  double line_difference(const Vec& y, const Vec& w, double t) const;

  /// Long-range part only (no short-range term), respecting the mode.
  double eval_long_range(const Vec& x) const;
  Vec grad_long_range(const Vec& x) const;

  /// Same model with a different mode / without the short-range term / with
  /// only term j kept.
  PotentialModel with_mode(PotentialMode m) const;
  PotentialModel long_range_only() const;
  PotentialModel single_term(std::size_t j) const;
  PotentialModel scaled(double factor) const;
  /// Model rotated by the orthogonal matrix `rows` (V'(x) = V(R^T x)); axes
  /// of axial profiles are mapped by R.
  PotentialModel rotated(const std::vector<Vec>& rows) const;

  bool has_unit_order_term() const;
  /// Smallest order rho_1, or nullopt for a pure short-range model.
  std::optional<double> leading_order() const;

private:
  void check_point(const Vec& x) const;

  int dim_;
  std::vector<HomogeneousTerm> terms_;
  std::optional<ShortRangeTerm> short_range_;
  SmoothCutoff cutoff_;
  PotentialMode mode_;
};

/// |V(t x) - t^{-rho} V(x)| / |V(x)| for the bare term (0 when both vanish).
double verify_homogeneity(const HomogeneousTerm& term, const Vec& x, double t);

/// Fixtures shared by tests, the acceptance suite and the CLI self-test.
namespace fixtures {
/// Radial term rho = 3/4, coupling 1.
PotentialModel p1(PotentialMode mode = PotentialMode::bare);
/// rho = 0.6, profile 1 + (1/2) <xhat, e3>^2.
PotentialModel p2(PotentialMode mode = PotentialMode::bare);
/// P2's term + radial rho = 1 coupling 1/2 + short-range (1+|x|^2)^{-1}.
PotentialModel p3(PotentialMode mode = PotentialMode::cutoff);
PotentialModel zero();
}  // namespace fixtures

}  // namespace lrisp
