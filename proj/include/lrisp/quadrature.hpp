#pragma once

// Adaptive Gauss-Kronrod (G10/K21) integration for scalar, complex and
// small-vector integrands, plus a half-line driver for slowly (power-law)
// decaying integrands: geometric panels out to a reach T, then an analytic
// tail from a two-point power-law fit.

#include <algorithm>
#include <cmath>
#include <complex>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "lrisp/errors.hpp"
#include "lrisp/vec.hpp"

namespace lrisp::quad {

inline double qnorm(double x) { return std::abs(x); }
inline double qnorm(const std::complex<double>& z) { return std::abs(z); }
inline double qnorm(const Vec& v) {
  double m = 0.0;
  for (int i = 0; i < v.dim(); ++i) m = std::max(m, std::abs(v[i]));
  return m;
}

template <class T>
struct Result {
  T value{};
  double error = 0.0;
  long evaluations = 0;
};

struct Tolerance {
  double abs = 1e-13;
  double rel = 1e-10;
  int max_intervals = 4000;
};

namespace detail {

using Kronrod21 = boost::math::quadrature::gauss_kronrod<double, 21>;
using Gauss10 = boost::math::quadrature::gauss<double, 10>;

template <class T>
struct Panel {
  double a, b;
  T value;
  double error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

}  // namespace detail

/// One G10/K21 panel on [a, b]; error is |K21 - G10| in the value norm.
template <class F>
auto gk21(F&& f, double a, double b) {
  using T = decltype(f(a));
  const auto& x = detail::Kronrod21::abscissa();
  const auto& wk = detail::Kronrod21::weights();
  const auto& wg = detail::Gauss10::weights();
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  T f0 = f(c);
  T kron = f0 * wk[0];
  T gauss = f0 * 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    T fp = f(c + h * x[i]);
    T fm = f(c - h * x[i]);
    T sum = fp + fm;
    kron += sum * wk[i];
    if (i % 2 == 1) gauss += sum * wg[i / 2];
  }
  kron *= h;
  gauss *= h;
  const double err = qnorm(kron - gauss);
  return detail::Panel<T>{a, b, kron, err};
}

/// Globally adaptive integration over the panels delimited by `breaks`
/// (sorted, at least two entries). Bisects the worst panel until the summed
/// error estimate is below max(tol.abs, tol.rel * |I|).
template <class F>
auto integrate(F&& f, std::span<const double> breaks, const Tolerance& tol = {}) {
  using T = decltype(f(breaks[0]));
  using Panel = detail::Panel<T>;
  if (breaks.size() < 2) throw DomainError("integrate: need at least two breakpoints");
  std::priority_queue<Panel> heap;
  Result<T> out;
  bool first = true;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (!(breaks[i + 1] > breaks[i])) continue;
    Panel p = gk21(f, breaks[i], breaks[i + 1]);
    out.evaluations += 21;
    if (first) {
      out.value = p.value;
      first = false;
    } else {
      out.value += p.value;
    }
    out.error += p.error;
    heap.push(std::move(p));
  }
  if (first) {
    out.value = f(breaks[0]) * 0.0;
    return out;
  }
  int intervals = static_cast<int>(heap.size());
  while (out.error > std::max(tol.abs, tol.rel * qnorm(out.value))) {
    if (intervals >= tol.max_intervals) {
      throw QuadratureError("adaptive quadrature hit the interval limit (error " +
                            std::to_string(out.error) + ")");
    }
    Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      throw QuadratureError("adaptive quadrature: interval underflow");
    }
    Panel left = gk21(f, worst.a, mid);
    Panel right = gk21(f, mid, worst.b);
    out.evaluations += 42;
    out.value += (left.value + right.value) - worst.value;
    out.error += left.error + right.error - worst.error;
    heap.push(std::move(left));
    heap.push(std::move(right));
    ++intervals;
  }
  // Re-sum in a fixed order so the value does not carry the incremental
  // update rounding.
  T total = heap.top().value * 0.0;
  std::vector<Panel> panels;
  panels.reserve(heap.size());
  while (!heap.empty()) {
    panels.push_back(heap.top());
    heap.pop();
  }
  std::sort(panels.begin(), panels.end(), [](const Panel& l, const Panel& r) { return l.a < r.a; });
  double err = 0.0;
  for (const auto& p : panels) {
    total += p.value;
    err += p.error;
  }
  out.value = total;
  out.error = err;
  return out;
}

template <class F>
auto integrate(F&& f, double a, double b, const Tolerance& tol = {}) {
  const double br[2] = {a, b};
  return integrate(std::forward<F>(f), std::span<const double>(br, 2), tol);
}

/// Two-point power-law tail: given f(T/2) and f(T) of an integrand decaying
/// like c t^{-gamma}, returns the integral over [T, inf) and adds its
/// uncertainty to `err`. Negligible tails (|f(T)| T below `negligible`)
/// return 0. When the two samples do not look like a single decaying power
/// (sign change, growth) the tail uses `gamma_fallback` and is charged in
/// full to the error. A fitted exponent <= 1 is not integrable and throws.
inline double power_tail(double f_half, double f_end, double reach, double negligible,
                         double gamma_fallback, double& err) {
  if (std::abs(f_end) * reach <= negligible) return 0.0;
  if (f_half == 0.0 || f_end / f_half <= 0.0 || std::abs(f_end) >= std::abs(f_half)) {
    const double tail = f_end * reach / (gamma_fallback - 1.0);
    err += std::abs(tail);
    return tail;
  }
  const double gamma = std::log2(f_half / f_end);
  if (gamma <= 1.0) {
    throw QuadratureError("power-law tail fit failed: decay exponent " + std::to_string(gamma) +
                          " <= 1 is not integrable (f(T/2)=" + std::to_string(f_half) +
                          ", f(T)=" + std::to_string(f_end) + ")");
  }
  return f_end * reach / (gamma - 1.0);
}

inline double power_tail_component(double fh, double fe, double reach, double negligible, double gf,
                                   double& err) {
  return power_tail(fh, fe, reach, negligible, gf, err);
}
inline Vec power_tail_component(const Vec& fh, const Vec& fe, double reach, double negligible, double gf,
                                double& err) {
  Vec out(fh.dim());
  for (int i = 0; i < fh.dim(); ++i) out[i] = power_tail(fh[i], fe[i], reach, negligible, gf, err);
  return out;
}

struct HalfLineOptions {
  Tolerance tol{};
  /// Quadrature runs on [0, T]; the rest is the analytic power-law tail.
  double reach = 1e5;
  /// Decay exponent assumed when the two-point tail fit is inconclusive.
  double gamma_fallback = 1.5;
};

/// Integral of f over [0, inf). Panels grow geometrically (ratio 2) from
/// [0, scale] out to T = reach * outer_scale; `extra_breaks` inside (0, T)
/// are added. The tail past T comes from the two-point power-law fit.
template <class F>
auto integrate_half_line(F&& f, double scale, double outer_scale, std::span<const double> extra_breaks,
                         const HalfLineOptions& opt = {}) {
  if (!(scale > 0.0) || !(outer_scale >= scale)) throw DomainError("integrate_half_line: bad scales");
  const double T = opt.reach * outer_scale;
  std::vector<double> br{0.0};
  for (double b = scale; b < T; b *= 2.0) br.push_back(b);
  br.push_back(T);
  for (double e : extra_breaks)
    if (e > 0.0 && e < T) br.push_back(e);
  std::sort(br.begin(), br.end());
  br.erase(std::unique(br.begin(), br.end()), br.end());
  auto res = integrate(f, std::span<const double>(br), opt.tol);
  const auto f_half = f(0.5 * T);
  const auto f_end = f(T);
  res.evaluations += 2;
  const double negligible = 1e-3 * std::max(opt.tol.abs, opt.tol.rel * qnorm(res.value));
  double tail_err = 0.0;
  const auto tail = power_tail_component(f_half, f_end, T, negligible, opt.gamma_fallback, tail_err);
  res.value += tail;
  // A two-point fit is exact for a pure power law; the next-order term is
  // down by roughly scale / T.
  res.error += tail_err + qnorm(tail) * outer_scale / T;
  return res;
}

/// Gauss-Legendre rule with n nodes mapped to [a, b].
struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
Rule gauss_legendre(int n, double a, double b);

}  // namespace lrisp::quad
