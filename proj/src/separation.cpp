#include "lrisp/separation.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>

#include <Eigen/Dense>

namespace lrisp {

std::vector<double> RayGrid::radii() const {
  if (!(s_min > 0.0) || !(s_max > s_min) || points < 2) throw DomainError("invalid ray grid");
  std::vector<double> r(points);
  const double q = ratio();
  for (int i = 0; i < points; ++i) r[i] = s_min * std::pow(q, i);
  r.back() = s_max;
  return r;
}

double RayGrid::ratio() const { return std::pow(s_max / s_min, 1.0 / (points - 1)); }

GradientSource model_gradient_source(const PotentialModel& model, PhaseOptions opt) {
  auto m = std::make_shared<const PotentialModel>(model);
  return [m, opt](const TangentPoint& p, const Vec& e) { return dot(grad_phase(*m, p, opt), e); };
}

GradientSource oracle_gradient_source(const SymbolOracle& oracle, double h, int order) {
  return [oracle, h, order](const TangentPoint& p, const Vec& e) { return extract_directional(oracle, p, e, h, order); };
}

RaySamples sample_ray(const GradientSource& src, const Direction& omega, const Vec& u, const Vec& e,
                      const RayGrid& grid) {
  const Vec uu = reject(u, omega.vec());
  const Vec ee = reject(e, omega.vec());
  if (norm(uu) < 1e-12 || std::abs(norm(uu) - 1.0) > 1e-12 || std::abs(norm(ee) - 1.0) > 1e-12) {
    throw DomainError("sample_ray: u and e must be unit vectors orthogonal to omega");
  }
  RaySamples out{omega, uu, ee, grid.radii(), {}};
  out.values.reserve(out.radii.size());
  for (double s : out.radii) out.values.push_back(src(TangentPoint(omega, uu * s), ee));
  return out;
}

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct LinearFit {
  VectorXd coeffs;
  VectorXd residual;  // weighted
  VectorXd std_errors;
  double condition = 1.0;
};

/// Weighted LS of values against {s^{-rho_j}} with row weights w.
LinearFit solve_linear(std::span<const double> s, std::span<const double> g, std::span<const double> w,
                       std::span<const double> exps) {
  const int n = static_cast<int>(s.size());
  const int k = static_cast<int>(exps.size());
  MatrixXd A(n, k);
  VectorXd b(n);
  for (int i = 0; i < n; ++i) {
    b[i] = w[i] * g[i];
    for (int j = 0; j < k; ++j) A(i, j) = w[i] * std::pow(s[i], -exps[j]);
  }
  LinearFit fit;
  if (k == 0) {
    fit.coeffs = VectorXd(0);
    fit.std_errors = VectorXd(0);
    fit.residual = b;
    return fit;
  }
  VectorXd scale(k);
  for (int j = 0; j < k; ++j) {
    scale[j] = A.col(j).norm();
    A.col(j) /= scale[j];
  }
  Eigen::JacobiSVD<MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  fit.condition = sv[k - 1] > 0.0 ? sv[0] / sv[k - 1] : std::numeric_limits<double>::infinity();
  VectorXd c = svd.solve(b);
  fit.residual = b - A * c;
  fit.coeffs = c.cwiseQuotient(scale);
  // Standard errors from the residual variance and (A^T A)^{-1} = V S^{-2} V^T.
  const double sigma2 = n > k ? fit.residual.squaredNorm() / (n - k) : 0.0;
  fit.std_errors = VectorXd(k);
  const MatrixXd& V = svd.matrixV();
  for (int j = 0; j < k; ++j) {
    double var = 0.0;
    for (int i = 0; i < k; ++i) var += V(j, i) * V(j, i) / (sv[i] * sv[i]);
    fit.std_errors[j] = std::sqrt(sigma2 * var) / scale[j];
  }
  return fit;
}

std::vector<double> leading_weights(std::span<const double> s, double rho) {
  std::vector<double> w(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) w[i] = std::pow(s[i] / s.front(), rho);
  return w;
}

/// Variable-projection Levenberg-Marquardt over the exponents.
std::vector<double> refine_exponents(std::span<const double> s, std::span<const double> g, std::span<const double> w,
                                     std::vector<double> exps, std::span<const char> frozen) {
  const int k = static_cast<int>(exps.size());
  if (k == 0) return exps;
  auto cost = [&](const std::vector<double>& e) {
    const auto f = solve_linear(s, g, w, e);
    return f.residual;
  };
  VectorXd r = cost(exps);
  double f0 = r.squaredNorm();
  double mu = 1e-3;
  for (int it = 0; it < 200; ++it) {
    MatrixXd J(r.size(), k);
    for (int j = 0; j < k; ++j) {
      if (frozen[j]) {
        J.col(j).setZero();
        continue;
      }
      const double h = 1e-6 * std::max(1.0, std::abs(exps[j]));
      auto ep = exps, em = exps;
      ep[j] += h;
      em[j] -= h;
      J.col(j) = (cost(ep) - cost(em)) / (2.0 * h);
    }
    const MatrixXd JtJ = J.transpose() * J;
    const VectorXd Jtr = J.transpose() * r;
    bool improved = false;
    for (int tries = 0; tries < 30; ++tries) {
      MatrixXd H = JtJ;
      for (int j = 0; j < k; ++j) H(j, j) += mu * (JtJ(j, j) > 0.0 ? JtJ(j, j) : 1.0);
      const VectorXd step = -H.ldlt().solve(Jtr);
      auto trial = exps;
      // Small trust region: the pencil seeds are already close, and a long
      // step can trade a weakly determined fast exponent for a spurious slow one.
      for (int j = 0; j < k; ++j)
        if (!frozen[j]) trial[j] = std::max(0.05, trial[j] + std::clamp(step[j], -0.02, 0.02));
      const VectorXd rt = cost(trial);
      const double ft = rt.squaredNorm();
      if (std::isfinite(ft) && ft < f0) {
        const double rel = (f0 - ft) / std::max(f0, 1e-300);
        exps = trial;
        r = rt;
        f0 = ft;
        mu = std::max(mu * 0.3, 1e-12);
        improved = true;
        if (rel < 1e-14 || step.norm() < 1e-13) return exps;
        break;
      }
      mu *= 10.0;
    }
    if (!improved) break;
  }
  return exps;
}

/// Matrix-pencil estimate of the exponents of g_i = sum_k c_k z_k^i with
/// real 0 < z_k < 1; the model order is the largest that yields only such
/// roots.
std::vector<double> pencil_exponents(std::span<const double> g, double q, const DetectOptions& opt) {
  const int n = static_cast<int>(g.size());
  const int L = n / 2;
  MatrixXd Y(n - L, L + 1);
  for (int i = 0; i < n - L; ++i)
    for (int j = 0; j <= L; ++j) Y(i, j) = g[i + j];
  Eigen::JacobiSVD<MatrixXd> svd(Y, Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  int kmax = 0;
  while (kmax < sv.size() && sv[kmax] > opt.sv_tol * sv[0]) ++kmax;
  kmax = std::min({kmax, opt.max_terms, L - 1});
  const MatrixXd& V = svd.matrixV();
  for (int k = kmax; k >= 1; --k) {
    const MatrixXd Vk = V.leftCols(k);
    const MatrixXd V1 = Vk.topRows(L);
    const MatrixXd V2 = Vk.bottomRows(L);
    const MatrixXd A = V1.completeOrthogonalDecomposition().solve(V2);
    Eigen::EigenSolver<MatrixXd> es(A, false);
    const auto& z = es.eigenvalues();
    bool ok = true;
    std::vector<double> exps;
    for (int i = 0; i < k && ok; ++i) {
      const std::complex<double> zi = z[i];
      if (std::abs(zi.imag()) > 1e-7 * std::abs(zi) || !(zi.real() > 0.0) || !(zi.real() < 1.0)) {
        ok = false;
        break;
      }
      exps.push_back(-std::log(zi.real()) / std::log(q));
    }
    if (ok) {
      std::sort(exps.begin(), exps.end());
      return exps;
    }
  }
  return {};
}

double loglog_slope_tail(std::span<const double> s, std::span<const double> r) {
  // Least-squares slope of log|r| over the last quarter of the grid.
  const std::size_t n = s.size();
  const std::size_t start = n - std::max<std::size_t>(4, n / 4);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (std::size_t i = start; i < n; ++i) {
    if (r[i] == 0.0) continue;
    const double x = std::log(s[i]), y = std::log(std::abs(r[i]));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m < 2) return -std::numeric_limits<double>::infinity();
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace

KnownFit fit_known_exponents(std::span<const double> radii, std::span<const double> values,
                             std::span<const double> exponents, double max_condition) {
  if (radii.size() != values.size()) throw DomainError("fit_known_exponents: size mismatch");
  if (radii.size() < exponents.size() + 2) throw DomainError("fit_known_exponents: too few samples");
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    if (!(exponents[i] > 0.0)) throw DomainError("fit_known_exponents: exponents must be positive");
    for (std::size_t j = 0; j < i; ++j)
      if (exponents[i] == exponents[j]) throw DomainError("fit_known_exponents: exponents must be distinct");
  }
  const double lead = exponents.empty() ? 0.0 : *std::min_element(exponents.begin(), exponents.end());
  const auto w = leading_weights(radii, lead);
  const auto fit = solve_linear(radii, values, w, exponents);
  if (fit.condition > max_condition) {
    throw ConditioningError("fit_known_exponents: design condition number " + std::to_string(fit.condition) +
                                " exceeds " + std::to_string(max_condition),
                            fit.condition);
  }
  KnownFit out;
  out.coeffs.assign(fit.coeffs.data(), fit.coeffs.data() + fit.coeffs.size());
  out.std_errors.assign(fit.std_errors.data(), fit.std_errors.data() + fit.std_errors.size());
  out.condition = fit.condition;
  double ss = 0.0;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    double model = 0.0;
    for (std::size_t j = 0; j < exponents.size(); ++j) model += out.coeffs[j] * std::pow(radii[i], -exponents[j]);
    ss += (values[i] - model) * (values[i] - model);
  }
  out.residual = std::sqrt(ss / radii.size());
  return out;
}

KnownFit fit_known_exponents(const RaySamples& samples, std::span<const double> exponents, double max_condition) {
  return fit_known_exponents(samples.radii, samples.values, exponents, max_condition);
}

double extrapolated_tail_slope(std::span<const double> s, std::span<const double> g) {
  const int n = static_cast<int>(s.size());
  const int m = std::max(1, n / 8);
  if (n < 2 * m + 2) return loglog_slope_tail(s, g);
  auto local = [&](int i) { return std::log(std::abs(g[i] / g[i - m])) / std::log(s[i] / s[i - m]); };
  for (int i = n - 1 - 3 * m; i < n; ++i)
    if (i >= 0 && g[i] == 0.0) return loglog_slope_tail(s, g);
  const double s0 = local(n - 1 - 2 * m), s1 = local(n - 1 - m), s2 = local(n - 1);
  const double d1 = s1 - s0, d2 = s2 - s1;
  if (d1 != 0.0) {
    const double ratio = d2 / d1;
    if (ratio > 0.0 && ratio < 0.95) return s2 + d2 * ratio / (1.0 - ratio);
  }
  return s2;
}

HomogeneousDecomposition detect_exponents(const RaySamples& samples, const DetectOptions& opt) {
  const auto& s = samples.radii;
  const auto& g = samples.values;
  const int n = static_cast<int>(s.size());
  if (n < 8) throw DomainError("detect_exponents: need at least 8 samples");
  const double q = s[1] / s[0];
  for (int i = 1; i < n; ++i) {
    if (std::abs(s[i] / s[i - 1] - q) > 1e-9 * q) throw DomainError("detect_exponents: radii must be geometric");
  }
  HomogeneousDecomposition out;
  double gmax = 0.0;
  for (double v : g) gmax = std::max(gmax, std::abs(v));
  if (!(gmax > opt.zero_floor)) {
    out.remainder_slope = -std::numeric_limits<double>::infinity();
    out.leading_slope = -std::numeric_limits<double>::infinity();
    return out;
  }
  out.leading_slope = extrapolated_tail_slope(s, g);

  auto exps = pencil_exponents(g, q, opt);
  if (exps.empty()) {
    out.warnings.push_back("no exponential-sum structure found; data treated as remainder");
    out.remainder_slope = loglog_slope_tail(s, g);
    if (out.remainder_slope > -0.5) throw ModelClassError("ray data decay more slowly than s^{-1/2}");
    return out;
  }
  const auto w = leading_weights(s, std::max(0.0, exps.front()));
  std::vector<char> frozen(exps.size(), 0);
  exps = refine_exponents(s, g, w, exps, frozen);
  auto fit = solve_linear(s, g, w, exps);

  // Drop components that carry no weight in the data.
  auto amplitude = [&](std::size_t j) { return std::abs(fit.coeffs[j]) * std::pow(s.front(), -exps[j]); };
  {
    std::vector<double> kept;
    for (std::size_t j = 0; j < exps.size(); ++j)
      if (amplitude(j) > opt.significance * gmax) kept.push_back(exps[j]);
    if (kept.size() != exps.size()) {
      exps = kept;
      std::sort(exps.begin(), exps.end());
      frozen.assign(exps.size(), 0);
      exps = refine_exponents(s, g, w, exps, frozen);
      fit = solve_linear(s, g, w, exps);
    }
  }
  for (std::size_t j = 0; j < exps.size(); ++j) {
    if (exps[j] <= 0.5 && amplitude(j) > opt.significance * gmax) {
      throw ModelClassError("component of order " + std::to_string(exps[j]) +
                            " decays no faster than s^{-1/2}; not a long-range term of the model class");
    }
  }

  // Merge exponents closer than gap_min; near-duplicates only inflate the
  // conditioning of the coefficient fit.
  std::sort(exps.begin(), exps.end());
  for (bool merged = true; merged;) {
    merged = false;
    for (std::size_t j = 0; j + 1 < exps.size(); ++j) {
      if (exps[j + 1] - exps[j] < opt.gap_min) {
        if (exps[j + 1] <= 1.0 + opt.delta) {
          out.warnings.push_back("merged exponents " + std::to_string(exps[j]) + " and " +
                                 std::to_string(exps[j + 1]) + " (closer than gap_min)");
        }
        exps[j] = 0.5 * (exps[j] + exps[j + 1]);
        exps.erase(exps.begin() + static_cast<long>(j) + 1);
        frozen.assign(exps.size(), 0);
        exps = refine_exponents(s, g, w, exps, frozen);
        std::sort(exps.begin(), exps.end());
        merged = true;
        break;
      }
    }
  }
  fit = solve_linear(s, g, w, exps);

  // Orders in (1, 1 + delta] sit on the model-class boundary: they count as
  // an order-1 term when pinning them to exactly 1 costs less than 10x in
  // residual, otherwise they are remainder.
  const double base_res = fit.residual.norm();
  for (std::size_t j = 0; j < exps.size(); ++j) {
    if (exps[j] > 1.0 && exps[j] <= 1.0 + opt.delta) {
      auto pinned = exps;
      pinned[j] = 1.0;
      std::vector<char> fz(exps.size(), 0);
      fz[j] = 1;
      pinned = refine_exponents(s, g, w, pinned, fz);
      const double pinned_res = solve_linear(s, g, w, pinned).residual.norm();
      if (pinned_res <= 10.0 * std::max(base_res, 1e-300)) {
        exps = pinned;
        fit = solve_linear(s, g, w, exps);
      }
    }
  }

  std::vector<std::size_t> order(exps.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return exps[a] < exps[b]; });
  for (std::size_t j : order) {
    if (exps[j] > 0.5 && exps[j] <= 1.0) {
      out.exponents.push_back(exps[j]);
      out.coefficients.push_back(fit.coeffs[j]);
    } else {
      out.remainder_exponents.push_back(exps[j]);
      out.remainder_coefficients.push_back(fit.coeffs[j]);
    }
  }
  out.conditioning = fit.condition;
  double ss = 0.0;
  const VectorXd res = fit.residual;
  for (int i = 0; i < n; ++i) ss += (res[i] / w[i]) * (res[i] / w[i]);
  out.residual = std::sqrt(ss / n);
  if (!out.remainder_exponents.empty()) {
    out.remainder_slope = -out.remainder_exponents.front();
  } else {
    std::vector<double> r(g.begin(), g.end());
    for (int i = 0; i < n; ++i)
      for (std::size_t j = 0; j < out.size(); ++j) r[i] -= evaluate_component(out, j, s[i]);
    out.remainder_slope = loglog_slope_tail(s, r);
    // Rounding-level leftovers carry no slope information.
    double rmax = 0.0;
    for (double v : r) rmax = std::max(rmax, std::abs(v));
    if (rmax <= 1e-10 * gmax || out.remainder_slope > -1.0 - opt.delta) {
      out.remainder_slope = -std::numeric_limits<double>::infinity();
    }
  }
  return out;
}

double evaluate_component(const HomogeneousDecomposition& decomp, std::size_t j, double s) {
  if (j >= decomp.exponents.size()) throw std::out_of_range("evaluate_component: index out of range");
  if (!(s > 0.0)) throw DomainError("evaluate_component: s must be positive");
  return decomp.coefficients[j] * std::pow(s, -decomp.exponents[j]);
}

namespace {

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

struct Cluster {
  double median;
  double spread;  // largest deviation of a member from the median
};

std::vector<Cluster> cluster_medians(std::vector<double> all, double gap, std::size_t min_support) {
  std::sort(all.begin(), all.end());
  std::vector<Cluster> out;
  std::size_t i = 0;
  while (i < all.size()) {
    std::size_t j = i + 1;
    while (j < all.size() && all[j] - all[j - 1] < gap) ++j;
    if (j - i >= min_support) {
      const double med = median({all.begin() + static_cast<long>(i), all.begin() + static_cast<long>(j)});
      out.push_back({med, std::max(med - all[i], all[j - 1] - med)});
    }
    i = j;
  }
  return out;
}

}  // namespace

ExponentConsensus consensus_exponents(const std::vector<HomogeneousDecomposition>& per_ray, const DetectOptions& opt) {
  ExponentConsensus out;
  if (per_ray.empty()) return out;
  std::vector<double> lr, rem, slopes;
  double cond = 1.0;
  for (const auto& d : per_ray) {
    lr.insert(lr.end(), d.exponents.begin(), d.exponents.end());
    rem.insert(rem.end(), d.remainder_exponents.begin(), d.remainder_exponents.end());
    slopes.push_back(d.remainder_slope);
    cond = std::max(cond, d.conditioning);
  }
  const std::size_t n = per_ray.size();
  for (const auto& c : cluster_medians(lr, opt.gap_min, std::max<std::size_t>(1, (n + 3) / 4))) {
    out.exponents.push_back(c.median);
    out.exponent_spread.push_back(c.spread);
  }
  for (const auto& c : cluster_medians(rem, opt.gap_min, std::max<std::size_t>(1, (n + 1) / 2)))
    out.remainder_exponents.push_back(c.median);
  out.remainder_slope = median(slopes);
  out.conditioning = cond;
  return out;
}

}  // namespace lrisp
