#pragma once

#include <array>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "lrisp/quadrature.hpp"
#include "lrisp/vec.hpp"

namespace lrisp {

/// Point or direction in plane coordinates.
using Plane2 = std::array<double, 2>;

/// Unit vector (cos theta, sin theta).
Plane2 angle_direction(double theta);
/// angle_direction(theta) rotated by +pi/2.
Plane2 angle_normal(double theta);

/// A two-dimensional plane through `origin`, spanned by an orthonormal pair
/// orthogonal to the origin vector.
class PlaneFrame {
public:
  /// Validates orthonormality of (f1, f2, origin/|origin|) to 1e-12.
  PlaneFrame(Vec origin, Vec f1, Vec f2);

  /// Plane through x orthogonal to x, with a deterministic basis.
  static PlaneFrame orthogonal_to(const Vec& x);

  const Vec& origin() const { return origin_; }
  const Vec& f1() const { return f1_; }
  const Vec& f2() const { return f2_; }

  /// p[0] f1 + p[1] f2.
  Vec embed(const Plane2& p) const { return f1_ * p[0] + f2_ * p[1]; }
  /// origin + embed(p).
  Vec point(const Plane2& p) const { return origin_ + embed(p); }

private:
  Vec origin_, f1_, f2_;
};

/// Function on plane coordinates with |v(y)| = O(|y|^{-decay}).
struct PlanarFunction {
  std::function<double(const Plane2&)> eval;
  double decay = 2.0;
};

/// Line integral int v(y + t omega) dt. Requires <y, omega> = 0 and
/// decay > 1.
double xray_forward(const PlanarFunction& v, const Plane2& y, const Plane2& omega,
                    const quad::Tolerance& tol = {1e-14, 1e-11, 4000});

struct RadonGrid {
  int angles = 32;
  int offsets = 257;
  double S = 40.0;
  double band = 8.0;
  int radial_nodes = 64;
  double tail_fraction = 0.2;  // outer share of offsets used for the tail fit

  std::vector<double> angle_values() const;   // theta_m = pi m / angles
  std::vector<double> offset_values() const;  // uniform on [-S, S]
};

/// c_+ s^{-gamma} for s > S and c_- |s|^{-gamma} for s < -S; absent when
/// the sinogram edge is negligible.
struct TailModel {
  double c_plus = 0.0;
  double c_minus = 0.0;
  double gamma = 0.0;
  bool present() const { return c_plus != 0.0 || c_minus != 0.0; }
};

/// r(s xi_hat(theta), omega(theta)) on an (angle, offset) grid, with
/// omega(theta) = xi_hat(theta) rotated by pi/2. Values are angle-major.
struct Sinogram {
  std::vector<double> angles;
  std::vector<double> offsets;
  std::vector<double> values;
  std::vector<TailModel> tails;
  double S = 0.0;

  double at(std::size_t m, std::size_t n) const { return values[m * offsets.size() + n]; }
  double& at(std::size_t m, std::size_t n) { return values[m * offsets.size() + n]; }
  /// Shape checks: uniform angles on [0, pi), uniform offsets on [-S, S].
  void validate() const;
};

/// Projection data r(y, omega) for a plane point y and direction omega.
using ProjectionSource = std::function<double(const Plane2& y, const Plane2& omega)>;

/// Samples a source on the grid. With `symmetrize`, each value is the mean
/// of r(y, omega) and r(y, -omega).
Sinogram sample_sinogram(const ProjectionSource& r, const RadonGrid& grid, bool symmetrize = false);

/// Sinogram of a planar function via xray_forward, with tails fitted.
Sinogram sinogram_of(const PlanarFunction& v, const RadonGrid& grid);

/// Fits c_+-|s|^{-gamma} per angle on the outer `fraction` of the offsets
/// (common gamma for both sides). Edges below `negligible` times the angle's
/// peak get no tail. Throws InversionError when the edge is not negligible
/// and no decaying power law fits.
void fit_tails(Sinogram& sino, double fraction = 0.2, double negligible = 1e-10);

/// v_hat(xi) = (2 pi)^{-1} int exp(-i |xi| s) r(s xi_hat, omega_xi) ds:
/// trapezoid sum on [-S, S] with Euler-Maclaurin end corrections and the
/// oscillatory tail of the fitted power law added in closed form. xi_hat
/// must be one of the sampled directions or its negative. Throws
/// InversionError for an angle without tail model whose edge exceeds 1e-8
/// of its peak.
std::complex<double> fourier_slice(const Sinogram& sino, const Plane2& xi);
/// Same for angle index m and radius kappa > 0.
std::complex<double> fourier_slice_at(const Sinogram& sino, std::size_t m, double kappa);

/// int_S^inf exp(-i kappa s) s^{-gamma} ds for kappa > 0, gamma > 0.
std::complex<double> oscillatory_tail(double kappa, double gamma, double S);

struct InversionResult {
  double value = 0.0;
  double error = 0.0;
  std::vector<double> bands;        // Xi/4, Xi/2, Xi
  std::vector<double> band_values;  // truncated inversions at those bands
  std::string tail_scheme;          // how the s-tails were closed
};

struct InversionOptions {
  int radial_nodes = 64;
  bool extrapolate = true;  // exponential-rate extrapolation across the bands
};

/// v(0) = (2 pi)^{-1} int_{|xi| <= Xi} v_hat(xi) dxi on the polar grid of the
/// sinogram angles and a radial Gauss rule, extrapolated across the bands
/// Xi/4, Xi/2, Xi. Throws InversionError when the band sequence diverges or
/// Xi reaches the offset Nyquist limit pi / h.
InversionResult invert_at_origin(const Sinogram& sino, double band, const InversionOptions& opt = {});

}  // namespace lrisp
