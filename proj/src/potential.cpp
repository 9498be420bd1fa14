#include "lrisp/potential.hpp"

#include <cmath>
#include <string>

namespace lrisp {

Profile Profile::axial(const Vec& axis, std::vector<double> coeffs) {
  return {Kind::axial, normalized(axis), std::move(coeffs)};
}

double Profile::value(double t) const {
  if (kind == Kind::radial) return coeffs.empty() ? 1.0 : coeffs[0];
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * t + *it;
  return acc;
}

double Profile::derivative(double t) const {
  if (kind == Kind::radial) return 0.0;
  double acc = 0.0;
  for (std::size_t k = coeffs.size(); k-- > 1;) acc = acc * t + static_cast<double>(k) * coeffs[k];
  return acc;
}

double Profile::divided_difference(double a, double b) const {
  if (kind == Kind::radial || coeffs.size() < 2) return 0.0;
  // p(t) = (t - a) q(t) + p(a) with q(t) = sum_{k>=1} s_k t^{k-1}, s_k the
  // Horner partial sums at a; then (p(a) - p(b)) / (a - b) = q(b).
  double sa = 0.0, q = 0.0;
  for (std::size_t k = coeffs.size(); k-- > 1;) {
    sa = sa * a + coeffs[k];
    q = q * b + sa;
  }
  return q;
}

double Profile::at(const Vec& xhat) const {
  return kind == Kind::radial ? value(0.0) : value(dot(xhat, *axis));
}

double HomogeneousTerm::eval(const Vec& x) const {
  const double r = norm(x);
  if (r == 0.0) throw DomainError("homogeneous term evaluated at the origin");
  const double p = profile.kind == Profile::Kind::radial ? profile.value(0.0)
                                                         : profile.value(dot(x, *profile.axis) / r);
  return coupling * std::pow(r, -rho) * p;
}

Vec HomogeneousTerm::grad(const Vec& x) const {
  const double r = norm(x);
  if (r == 0.0) throw DomainError("homogeneous term differentiated at the origin");
  const double rr = std::pow(r, -rho);
  if (profile.kind == Profile::Kind::radial) {
    return x * (-rho * coupling * profile.value(0.0) * rr / (r * r));
  }
  const Vec& e = *profile.axis;
  const double t = dot(x, e) / r;
  const double p = profile.value(t);
  const double dp = profile.derivative(t);
  // grad t = (e - t xhat) / r
  Vec g = x * (-rho * p / (r * r));
  g += (e - x * (t / r)) * (dp / r);
  return g * (coupling * rr);
}

namespace {

/// For x = y + t w: returns |x|^2 / t^2 - 1 and sets t / |x| - 1, both
/// computed without cancellation.
double relative_shift(const Vec& y, const Vec& w, double t, double& ratio_m1) {
  const double u = (2.0 * t * dot(y, w) + dot(y, y)) / (t * t);
  ratio_m1 = std::expm1(-0.5 * std::log1p(u));
  return u;
}

}  // namespace

double HomogeneousTerm::line_difference(const Vec& y, const Vec& w, double t) const {
  if (!(t > 0.0)) throw DomainError("line_difference needs t > 0");
  double ratio_m1 = 0.0;
  const double u = relative_shift(y, w, t, ratio_m1);
  const double tr = std::pow(t, -rho);
  // |x|^{-rho} P(a) - t^{-rho} P(b) = (|x|^{-rho} - t^{-rho}) P(a) + t^{-rho} (P(a) - P(b)).
  const double radial = tr * std::expm1(-0.5 * rho * std::log1p(u));
  if (profile.kind == Profile::Kind::radial) return coupling * radial * profile.value(0.0);
  const Vec& e = *profile.axis;
  const double r = t * std::sqrt(1.0 + u);
  const double b = dot(w, e);
  const double a_minus_b = dot(y, e) / r + b * ratio_m1;
  const double a = b + a_minus_b;
  return coupling * (radial * profile.value(a) + tr * a_minus_b * profile.divided_difference(a, b));
}

double ShortRangeTerm::line_difference(const Vec& y, const Vec& w, double t) const {
  const double q = 1.0 + t * t;
  return eval_radius(t) * std::expm1(-0.5 * rho_sr * std::log1p((2.0 * t * dot(y, w) + dot(y, y)) / q));
}

double ShortRangeTerm::eval_radius(double r) const { return g * std::pow(1.0 + r * r, -0.5 * rho_sr); }

double ShortRangeTerm::eval(const Vec& x) const { return eval_radius(norm(x)); }

Vec ShortRangeTerm::grad(const Vec& x) const {
  const double q = 1.0 + dot(x, x);
  return x * (-rho_sr * g * std::pow(q, -0.5 * rho_sr - 1.0));
}

namespace {
double bump(double u) { return u > 0.0 ? std::exp(-1.0 / u) : 0.0; }
double bump_prime(double u) { return u > 0.0 ? std::exp(-1.0 / u) / (u * u) : 0.0; }
}  // namespace

double SmoothCutoff::value(double r) const {
  if (r <= 0.5 * radius) return 0.0;
  if (r >= radius) return 1.0;
  const double u = (r - 0.5 * radius) / (0.5 * radius);
  const double a = bump(u), b = bump(1.0 - u);
  return a / (a + b);
}

double SmoothCutoff::derivative(double r) const {
  if (r <= 0.5 * radius || r >= radius) return 0.0;
  const double u = (r - 0.5 * radius) / (0.5 * radius);
  const double a = bump(u), b = bump(1.0 - u);
  const double da = bump_prime(u), db = -bump_prime(1.0 - u);
  const double s = a + b;
  return (da * b - a * db) / (s * s) / (0.5 * radius);
}

PotentialModel::PotentialModel(int dim, std::vector<HomogeneousTerm> terms,
                               std::optional<ShortRangeTerm> short_range, double cutoff_radius,
                               PotentialMode mode)
    : dim_(dim), terms_(std::move(terms)), short_range_(short_range), cutoff_{cutoff_radius}, mode_(mode) {
  if (dim < 3 || dim > kMaxDim) throw DomainError("potential model requires 3 <= d <= " + std::to_string(kMaxDim));
  if (!(cutoff_radius > 0.0)) throw DomainError("cutoff radius must be positive");
  double prev = 0.5;
  for (const auto& t : terms_) {
    if (!(t.rho > prev) || t.rho > 1.0) {
      throw DomainError("homogeneous orders must satisfy 1/2 < rho_1 < ... < rho_N <= 1");
    }
    prev = t.rho;
    if (t.profile.kind == Profile::Kind::axial) {
      if (!t.profile.axis || t.profile.axis->dim() != dim) throw DomainError("profile axis dimension mismatch");
    }
  }
  if (short_range_ && !(short_range_->rho_sr > 1.0)) throw DomainError("short-range order must exceed 1");
}

void PotentialModel::check_point(const Vec& x) const {
  if (x.dim() != dim_) throw DomainError("point dimension does not match the model");
}

double PotentialModel::eval_long_range(const Vec& x) const {
  check_point(x);
  if (terms_.empty()) return 0.0;
  const double r = norm(x);
  if (mode_ == PotentialMode::bare || r >= cutoff_.radius) {
    if (r == 0.0) throw DomainError("bare potential evaluated at the origin");
    double v = 0.0;
    for (const auto& t : terms_) v += t.eval(x);
    return v;
  }
  const double chi = cutoff_.value(r);
  if (chi == 0.0) return 0.0;
  double v = 0.0;
  for (const auto& t : terms_) v += t.eval(x);
  return chi * v;
}

Vec PotentialModel::grad_long_range(const Vec& x) const {
  check_point(x);
  Vec g(dim_);
  if (terms_.empty()) return g;
  const double r = norm(x);
  if (mode_ == PotentialMode::bare || r >= cutoff_.radius) {
    if (r == 0.0) throw DomainError("bare potential differentiated at the origin");
    for (const auto& t : terms_) g += t.grad(x);
    return g;
  }
  const double chi = cutoff_.value(r);
  if (chi == 0.0) return g;
  double v = 0.0;
  for (const auto& t : terms_) {
    v += t.eval(x);
    g += t.grad(x);
  }
  return g * chi + x * (v * cutoff_.derivative(r) / r);
}

double PotentialModel::eval(const Vec& x) const {
  double v = eval_long_range(x);
  if (short_range_) v += short_range_->eval(x);
  return v;
}

Vec PotentialModel::grad(const Vec& x) const {
  Vec g = grad_long_range(x);
  if (short_range_) g += short_range_->grad(x);
  return g;
}

double PotentialModel::line_difference(const Vec& y, const Vec& w, double t) const {
  check_point(y);
  if (!(t > 0.0)) throw DomainError("line_difference needs t > 0");
  const Vec x = y + w * t;
  const bool outside = mode_ == PotentialMode::bare || (t >= cutoff_.radius && norm(x) >= cutoff_.radius);
  if (!outside) return eval(x) - eval(w * t);
  double v = 0.0;
  for (const auto& term : terms_) v += term.line_difference(y, w, t);
  if (short_range_) v += short_range_->line_difference(y, w, t);
  return v;
}

PotentialModel PotentialModel::with_mode(PotentialMode m) const {
  return PotentialModel(dim_, terms_, short_range_, cutoff_.radius, m);
}

PotentialModel PotentialModel::long_range_only() const {
  return PotentialModel(dim_, terms_, std::nullopt, cutoff_.radius, mode_);
}

PotentialModel PotentialModel::single_term(std::size_t j) const {
  return PotentialModel(dim_, {terms_.at(j)}, std::nullopt, cutoff_.radius, mode_);
}

PotentialModel PotentialModel::scaled(double factor) const {
  auto terms = terms_;
  for (auto& t : terms) t.coupling *= factor;
  auto sr = short_range_;
  if (sr) sr->g *= factor;
  return PotentialModel(dim_, std::move(terms), sr, cutoff_.radius, mode_);
}

PotentialModel PotentialModel::rotated(const std::vector<Vec>& rows) const {
  auto terms = terms_;
  for (auto& t : terms) {
    if (t.profile.kind != Profile::Kind::axial) continue;
    const Vec& e = *t.profile.axis;
    Vec re(dim_);
    for (int i = 0; i < dim_; ++i) re[i] = dot(rows.at(i), e);
    t.profile.axis = normalized(re);
  }
  return PotentialModel(dim_, std::move(terms), short_range_, cutoff_.radius, mode_);
}

bool PotentialModel::has_unit_order_term() const {
  return !terms_.empty() && terms_.back().rho == 1.0;
}

std::optional<double> PotentialModel::leading_order() const {
  if (terms_.empty()) return std::nullopt;
  return terms_.front().rho;
}

double verify_homogeneity(const HomogeneousTerm& term, const Vec& x, double t) {
  if (!(t > 0.0)) throw DomainError("homogeneity check needs t > 0");
  const double v = term.eval(x);
  const double vt = term.eval(x * t);
  const double diff = std::abs(vt - std::pow(t, -term.rho) * v);
  if (v == 0.0) return vt == 0.0 ? 0.0 : diff;
  return diff / std::abs(v);
}

namespace fixtures {

PotentialModel p1(PotentialMode mode) {
  return PotentialModel(3, {HomogeneousTerm{0.75, Profile::radial(), 1.0}}, std::nullopt, 1.0, mode);
}

PotentialModel p2(PotentialMode mode) {
  HomogeneousTerm t{0.6, Profile::axial(Vec{0.0, 0.0, 1.0}, {1.0, 0.0, 0.5}), 1.0};
  return PotentialModel(3, {t}, std::nullopt, 1.0, mode);
}

PotentialModel p3(PotentialMode mode) {
  HomogeneousTerm t1{0.6, Profile::axial(Vec{0.0, 0.0, 1.0}, {1.0, 0.0, 0.5}), 1.0};
  HomogeneousTerm t2{1.0, Profile::radial(), 0.5};
  return PotentialModel(3, {t1, t2}, ShortRangeTerm{2.0, 1.0}, 1.0, mode);
}

PotentialModel zero() { return PotentialModel(3, {}, std::nullopt, 1.0, PotentialMode::cutoff); }

}  // namespace fixtures

}  // namespace lrisp
