#include "lrisp/radon.hpp"

#include <cmath>
#include <numbers>

#include "lrisp/errors.hpp"
#include "lrisp/kernels.hpp"

namespace lrisp {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kGramTol = 1e-12;
constexpr double kTruncationTolerance = 1e-8;  // edge / peak above which a tail model is required
}  // namespace

Plane2 angle_direction(double theta) { return {std::cos(theta), std::sin(theta)}; }
Plane2 angle_normal(double theta) { return {-std::sin(theta), std::cos(theta)}; }

PlaneFrame::PlaneFrame(Vec origin, Vec f1, Vec f2) : origin_(origin), f1_(f1), f2_(f2) {
  if (origin.dim() != f1.dim() || origin.dim() != f2.dim()) throw DomainError("plane frame: dimension mismatch");
  const double on = norm(origin);
  if (!(on > 0.0)) throw DomainError("plane frame: origin must be nonzero");
  const Vec xh = origin * (1.0 / on);
  const Vec* b[3] = {&f1_, &f2_, &xh};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const double want = i == j ? 1.0 : 0.0;
      if (std::abs(dot(*b[i], *b[j]) - want) > kGramTol) {
        throw DomainError("plane frame: (f1, f2, x_hat) is not orthonormal");
      }
    }
}

PlaneFrame PlaneFrame::orthogonal_to(const Vec& x) {
  const auto basis = tangent_basis(Direction(x));
  return PlaneFrame(x, basis[0], basis[1]);
}

double xray_forward(const PlanarFunction& v, const Plane2& y, const Plane2& omega, const quad::Tolerance& tol) {
  if (!(v.decay > 1.0)) throw DomainError("xray_forward: decay order must exceed 1");
  const double on = std::hypot(omega[0], omega[1]);
  if (std::abs(on - 1.0) > 1e-12) throw DomainError("xray_forward: omega must be a unit vector");
  const double yn = std::hypot(y[0], y[1]);
  if (std::abs(y[0] * omega[0] + y[1] * omega[1]) > 1e-12 * std::max(1.0, yn)) {
    throw DomainError("xray_forward: y must be orthogonal to omega");
  }
  quad::HalfLineOptions opt;
  opt.tol = tol;
  opt.reach = 1e4;
  opt.gamma_fallback = v.decay;
  const double scale = std::max(1.0, yn);
  double total = 0.0;
  for (double sign : {1.0, -1.0}) {
    auto f = [&](double t) { return v.eval({y[0] + sign * t * omega[0], y[1] + sign * t * omega[1]}); };
    total += quad::integrate_half_line(f, scale, scale, {}, opt).value;
  }
  return total;
}

std::vector<double> RadonGrid::angle_values() const {
  if (angles < 1) throw DomainError("radon grid: need at least one angle");
  std::vector<double> out(angles);
  for (int m = 0; m < angles; ++m) out[m] = kPi * m / angles;
  return out;
}

std::vector<double> RadonGrid::offset_values() const {
  if (offsets < 3 || !(S > 0.0)) throw DomainError("radon grid: need >= 3 offsets on a positive half-width");
  std::vector<double> out(offsets);
  for (int n = 0; n < offsets; ++n) out[n] = -S + 2.0 * S * n / (offsets - 1);
  return out;
}

void Sinogram::validate() const {
  const std::size_t na = angles.size(), no = offsets.size();
  if (na == 0 || no < 3) throw DomainError("sinogram: empty grid");
  if (values.size() != na * no) throw DomainError("sinogram: value count does not match the grid");
  if (!tails.empty() && tails.size() != na) throw DomainError("sinogram: one tail model per angle expected");
  for (std::size_t m = 0; m < na; ++m) {
    if (std::abs(angles[m] - kPi * m / na) > 1e-9) throw DomainError("sinogram: angles must be pi m / M");
  }
  const double h = 2.0 * S / (no - 1);
  for (std::size_t n = 0; n < no; ++n) {
    if (std::abs(offsets[n] - (-S + h * n)) > 1e-9 * S) throw DomainError("sinogram: offsets must be uniform on [-S, S]");
  }
}

Sinogram sample_sinogram(const ProjectionSource& r, const RadonGrid& grid, bool symmetrize) {
  Sinogram out;
  out.angles = grid.angle_values();
  out.offsets = grid.offset_values();
  out.S = grid.S;
  out.values.resize(out.angles.size() * out.offsets.size());
  for (std::size_t m = 0; m < out.angles.size(); ++m) {
    const Plane2 xi = angle_direction(out.angles[m]);
    const Plane2 om = angle_normal(out.angles[m]);
    for (std::size_t n = 0; n < out.offsets.size(); ++n) {
      const double s = out.offsets[n];
      const Plane2 y{s * xi[0], s * xi[1]};
      double val = r(y, om);
      if (symmetrize) val = 0.5 * (val + r(y, {-om[0], -om[1]}));
      out.at(m, n) = val;
    }
  }
  return out;
}

Sinogram sinogram_of(const PlanarFunction& v, const RadonGrid& grid) {
  auto sino = sample_sinogram([&](const Plane2& y, const Plane2& om) { return xray_forward(v, y, om); }, grid);
  fit_tails(sino, grid.tail_fraction);
  return sino;
}

void fit_tails(Sinogram& sino, double fraction, double negligible) {
  sino.validate();
  const std::size_t no = sino.offsets.size();
  const std::size_t k = std::max<std::size_t>(3, static_cast<std::size_t>(std::ceil(fraction * (no - 1) / 2.0)));
  sino.tails.assign(sino.angles.size(), TailModel{});
  for (std::size_t m = 0; m < sino.angles.size(); ++m) {
    double peak = 0.0;
    for (std::size_t n = 0; n < no; ++n) peak = std::max(peak, std::abs(sino.at(m, n)));
    const double edge = std::max(std::abs(sino.at(m, 0)), std::abs(sino.at(m, no - 1)));
    if (edge <= negligible * peak) continue;

    // Sides with a constant sign enter a common-slope regression of log|r|
    // against log|s| with one intercept per side.
    struct Side {
      bool usable = true;
      double sign = 0.0, sx = 0, sy = 0;
      int count = 0;
    } side[2];
    double sxx = 0, sxy = 0;
    std::vector<std::pair<int, std::pair<double, double>>> pts;
    for (int sd = 0; sd < 2; ++sd) {
      for (std::size_t i = 0; i < k; ++i) {
        const std::size_t n = sd == 0 ? no - 1 - i : i;
        const double r = sino.at(m, n);
        const double sg = r > 0 ? 1.0 : (r < 0 ? -1.0 : 0.0);
        if (sg == 0.0 || (side[sd].sign != 0.0 && sg != side[sd].sign)) side[sd].usable = false;
        side[sd].sign = sg;
      }
    }
    for (int sd = 0; sd < 2; ++sd) {
      if (!side[sd].usable) continue;
      for (std::size_t i = 0; i < k; ++i) {
        const std::size_t n = sd == 0 ? no - 1 - i : i;
        const double x = std::log(std::abs(sino.offsets[n])), y = std::log(std::abs(sino.at(m, n)));
        pts.push_back({sd, {x, y}});
        side[sd].sx += x;
        side[sd].sy += y;
        side[sd].count++;
      }
    }
    // Centre per side, then pool for the slope.
    for (const auto& [sd, xy] : pts) {
      const double xc = xy.first - side[sd].sx / side[sd].count;
      const double yc = xy.second - side[sd].sy / side[sd].count;
      sxx += xc * xc;
      sxy += xc * yc;
    }
    const std::size_t edge_index[2] = {no - 1, 0};
    for (int sd = 0; sd < 2; ++sd) {
      if (!side[sd].usable && std::abs(sino.at(m, edge_index[sd])) > negligible * peak) {
        throw InversionError("sinogram tail at angle " + std::to_string(sino.angles[m]) +
                             " changes sign near the edge; no power-law tail model fits");
      }
    }
    if (pts.empty() || sxx <= 0.0) continue;
    const double gamma = -sxy / sxx;
    if (!(gamma > 0.0)) {
      throw InversionError("sinogram tail at angle " + std::to_string(sino.angles[m]) +
                           " does not decay (fitted exponent " + std::to_string(gamma) + ")");
    }
    TailModel& t = sino.tails[m];
    t.gamma = gamma;
    for (int sd = 0; sd < 2; ++sd) {
      if (!side[sd].usable) continue;
      const double xm = side[sd].sx / side[sd].count, ym = side[sd].sy / side[sd].count;
      const double c = side[sd].sign * std::exp(ym + gamma * xm);
      (sd == 0 ? t.c_plus : t.c_minus) = c;
    }
  }
}

std::complex<double> oscillatory_tail(double kappa, double gamma, double S) {
  if (!(kappa > 0.0) || !(gamma > 0.0) || !(S > 0.0)) throw DomainError("oscillatory_tail: needs kappa, gamma, S > 0");
  // Rotating the contour to s = S - i u / kappa turns the oscillation into
  // exp(-u); equivalently (i kappa)^{gamma-1} Gamma(1-gamma, i kappa S).
  const double a = kappa * S;
  auto f = [&](double u) { return std::exp(-u) * std::pow(std::complex<double>(1.0, -u / a), -gamma); };
  std::vector<double> br{0.0};
  for (double b : {0.25 * a, a, 4.0 * a, 16.0 * a, 1.0, 4.0, 16.0})
    if (b > 0.0 && b < 50.0) br.push_back(b);
  br.push_back(50.0);
  std::sort(br.begin(), br.end());
  br.erase(std::unique(br.begin(), br.end()), br.end());
  const auto I = quad::integrate(f, std::span<const double>(br), {1e-16, 1e-13, 2000}).value;
  const std::complex<double> phase(std::cos(kappa * S), -std::sin(kappa * S));
  return std::complex<double>(0.0, -1.0 / kappa) * phase * std::pow(S, -gamma) * I;
}

namespace {

/// m-th derivative at s = S of c exp(-i kappa s) s^{-gamma}; with
/// conj_phase the exponential is exp(+i kappa s).
std::complex<double> tail_derivative(double c, double kappa, double gamma, double S, int m, bool conj_phase) {
  const std::complex<double> ik(0.0, conj_phase ? kappa : -kappa);
  std::complex<double> acc = 0.0;
  double binom = 1.0, falling = 1.0;
  for (int j = 0; j <= m; ++j) {
    acc += binom * std::pow(ik, m - j) * falling * std::pow(S, -gamma - j);
    binom = binom * (m - j) / (j + 1);
    falling *= -gamma - j;
  }
  const std::complex<double> e(std::cos(kappa * S), conj_phase ? std::sin(kappa * S) : -std::sin(kappa * S));
  return c * e * acc;
}

}  // namespace

std::complex<double> fourier_slice_at(const Sinogram& sino, std::size_t m, double kappa) {
  const std::size_t no = sino.offsets.size();
  if (m >= sino.angles.size()) throw DomainError("fourier_slice: angle index out of range");
  const double h = sino.offsets[1] - sino.offsets[0];
  const double S = sino.S;
  const TailModel tail = sino.tails.empty() ? TailModel{} : sino.tails[m];
  if (!tail.present()) {
    double peak = 0.0;
    for (std::size_t n = 0; n < no; ++n) peak = std::max(peak, std::abs(sino.at(m, n)));
    const double edge = std::max(std::abs(sino.at(m, 0)), std::abs(sino.at(m, no - 1)));
    if (edge > kTruncationTolerance * peak) {
      throw InversionError("sinogram truncated at angle " + std::to_string(sino.angles[m]) + ": edge " +
                           std::to_string(edge) + " without a tail model");
    }
  }
  if (kappa == 0.0) {
    double acc = 0.0;
    for (std::size_t n = 0; n < no; ++n) acc += (n == 0 || n + 1 == no ? 0.5 : 1.0) * h * sino.at(m, n);
    if (tail.present()) {
      if (tail.gamma <= 1.0) throw DomainError("fourier_slice: transform unbounded at xi = 0 for tail order <= 1");
      acc += (tail.c_plus + tail.c_minus) * std::pow(S, 1.0 - tail.gamma) / (tail.gamma - 1.0);
    }
    return acc / (2.0 * kPi);
  }
  if (!(kappa > 0.0)) throw DomainError("fourier_slice: kappa must be non-negative");

  std::vector<double> a(no);
  for (std::size_t n = 0; n < no; ++n) a[n] = (n == 0 || n + 1 == no ? 0.5 : 1.0) * h * sino.at(m, n);
  std::complex<double> total = kernels::oscillatory_sum(a.data(), no, sino.offsets.front(), h, kappa);

  if (tail.present()) {
    // Euler-Maclaurin end corrections with odd derivatives of the tail model;
    // the series in (kappa h / 2 pi)^2 converges below the Nyquist band.
    static constexpr double kB[] = {1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0};
    double fact = 1.0, hp = 1.0;
    for (int k = 1; k <= 4; ++k) {
      fact *= (2.0 * k - 1.0) * (2.0 * k);
      hp *= h * h;
      const int d = 2 * k - 1;
      const auto right = tail_derivative(tail.c_plus, kappa, tail.gamma, S, d, false);
      // f(-S - u) = c_- exp(+i kappa (S + u)) (S + u)^{-gamma}; d/ds = -d/du.
      const auto left = -tail_derivative(tail.c_minus, kappa, tail.gamma, S, d, true);
      total -= kB[k - 1] * hp / fact * (right - left);
    }
    const auto E = oscillatory_tail(kappa, tail.gamma, S);
    total += tail.c_plus * E + tail.c_minus * std::conj(E);
  }
  return total / (2.0 * kPi);
}

std::complex<double> fourier_slice(const Sinogram& sino, const Plane2& xi) {
  const double kappa = std::hypot(xi[0], xi[1]);
  if (!(kappa > 0.0)) throw DomainError("fourier_slice: xi must be nonzero");
  const double theta = std::atan2(xi[1], xi[0]);
  for (std::size_t m = 0; m < sino.angles.size(); ++m) {
    const double diff = std::abs(std::remainder(theta - sino.angles[m], 2.0 * kPi));
    if (diff < 1e-9) return fourier_slice_at(sino, m, kappa);
    // r(y, omega) = r(y, -omega) and reality of r give v_hat(-xi) = conj v_hat(xi).
    if (std::abs(diff - kPi) < 1e-9) return std::conj(fourier_slice_at(sino, m, kappa));
  }
  throw DomainError("fourier_slice: direction of xi is not a sampled angle");
}

InversionResult invert_at_origin(const Sinogram& sino, double band, const InversionOptions& opt) {
  sino.validate();
  if (!(band > 0.0)) throw DomainError("invert_at_origin: band must be positive");
  const double nyquist = kPi / (sino.offsets[1] - sino.offsets[0]);
  if (band >= nyquist) {
    throw InversionError("band " + std::to_string(band) + " reaches the offset Nyquist limit " + std::to_string(nyquist));
  }
  const std::size_t na = sino.angles.size();
  InversionResult out;
  out.tail_scheme = "none";
  for (const auto& t : sino.tails)
    if (t.present()) out.tail_scheme = "power-law fit on outer offsets, oscillatory tail in closed form";
  const auto rule = quad::gauss_legendre(opt.radial_nodes, 0.0, 1.0);
  double scale = 0.0;
  for (double b : {0.25 * band, 0.5 * band, band}) {
    // kappa = b u^2 clusters nodes near the origin, where v_hat may be
    // weakly singular for slowly decaying v.
    double acc = 0.0;
    for (std::size_t m = 0; m < na; ++m) {
      for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double u = rule.nodes[i];
        const double kappa = b * u * u;
        const double term = rule.weights[i] * 2.0 * b * u * kappa * 2.0 * fourier_slice_at(sino, m, kappa).real();
        acc += term;
        scale += std::abs(term);
      }
    }
    out.bands.push_back(b);
    out.band_values.push_back(acc * (kPi / na) / (2.0 * kPi));
  }
  scale *= (kPi / na) / (2.0 * kPi);

  const double v1 = out.band_values[0], v2 = out.band_values[1], v3 = out.band_values[2];
  const double d1 = v2 - v1, d2 = v3 - v2;
  const double floor = 1e-14 * std::max(scale, 1e-300);
  out.value = v3;
  if (std::abs(d2) <= floor) {
    out.error = floor;
    return out;
  }
  const double r = d1 != 0.0 ? d2 / d1 : std::numeric_limits<double>::infinity();
  if (r > 0.0 && r < 1.0) {
    // Truncation error A x^{b / (Xi/4)}: d2/d1 = x (1 + x), and the part
    // left beyond Xi is d2 x^2 / (1 - x^2).
    const double x = 0.5 * (std::sqrt(1.0 + 4.0 * r) - 1.0);
    const double rest = d2 * x * x / (1.0 - x * x);
    if (opt.extrapolate) out.value = v3 + rest;
    out.error = std::abs(rest);
  } else if (std::abs(d2) < std::abs(d1)) {
    out.error = std::abs(d2);
  } else {
    throw InversionError("band doubling does not converge: v(Xi/4)=" + std::to_string(v1) +
                         ", v(Xi/2)=" + std::to_string(v2) + ", v(Xi)=" + std::to_string(v3));
  }
  return out;
}

}  // namespace lrisp
