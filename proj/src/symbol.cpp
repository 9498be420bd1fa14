#include "lrisp/symbol.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace lrisp {

Energy::Energy(double lambda) : lambda_(lambda), k_(std::sqrt(lambda)) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("energy must be positive and finite");
}

std::complex<double> principal_symbol(double phi, const Energy& energy) {
  const double arg = -phi / (2.0 * energy.k());
  return {std::cos(arg), std::sin(arg)};
}

namespace {
// Uniform double in [-1, 1) from the raw 64-bit engine output; avoids the
// implementation-defined std::uniform_real_distribution.
double unit_sym(std::mt19937_64& g) { return 2.0 * static_cast<double>(g() >> 11) * 0x1.0p-53 - 1.0; }
}  // namespace

SyntheticRemainder::SyntheticRemainder(int dim, double eps, double p_b, std::uint64_t seed) : eps_(eps), p_b_(p_b) {
  if (eps < 0.0) throw DomainError("perturbation amplitude must be non-negative");
  if (!(p_b > 0.0)) throw DomainError("perturbation decay order must be positive");
  std::mt19937_64 gen(seed);
  double total = 0.0;
  for (int k = 0; k < kModes; ++k) {
    Mode mode{{unit_sym(gen), unit_sym(gen)}, Vec(dim), Vec(dim)};
    for (int i = 0; i < dim; ++i) mode.m[i] = unit_sym(gen);
    for (int i = 0; i < dim; ++i) mode.n[i] = unit_sym(gen);
    total += std::abs(mode.c);
    modes_.push_back(mode);
  }
  norm_ = total > 0.0 ? 1.0 / total : 0.0;
}

std::complex<double> SyntheticRemainder::operator()(const Vec& y, const Vec& omega) const {
  if (eps_ == 0.0) return {0.0, 0.0};
  const double q = 1.0 + dot(y, y);
  const Vec w = y * (1.0 / std::sqrt(q));
  std::complex<double> acc{0.0, 0.0};
  for (const auto& mode : modes_) {
    const double arg = kSpatialFrequency * dot(mode.m, w) + dot(mode.n, omega);
    acc += mode.c * std::complex<double>(std::cos(arg), std::sin(arg));
  }
  return acc * (eps_ * norm_ * std::pow(2.0 * q, -0.5 * p_b_));
}

double SyntheticRemainder::envelope(double ynorm) const { return eps_ * std::pow(1.0 + ynorm, -p_b_); }

namespace {
double default_p_b(const PotentialModel& model, const PerturbationSpec& pert) {
  if (pert.p_b) return *pert.p_b;
  const auto rho1 = model.leading_order();
  return rho1 ? 2.0 * *rho1 - 1.0 : 1.0;
}
}  // namespace

SymbolOracle::SymbolOracle(std::shared_ptr<const PotentialModel> model, Energy energy, const PerturbationSpec& pert,
                           std::optional<GaugePhase> gauge, PhaseOptions phase_opt) {
  if (!model) throw DomainError("symbol oracle needs a potential model");
  const double p_b = default_p_b(*model, pert);
  const int dim = model->dim();
  src_ = std::make_shared<const Source>(
      Source{std::move(model), energy, SyntheticRemainder(dim, pert.eps, p_b, pert.seed), std::move(gauge), phase_opt});
}

bool SymbolOracle::contains(const Direction& omega) const {
  for (const auto& caps : restrictions_) {
    bool inside = false;
    for (const auto& cap : caps) inside = inside || cap.contains(omega);
    if (!inside) return false;
  }
  return true;
}

std::complex<double> SymbolOracle::sample(const TangentPoint& p) const {
  if (!contains(p.omega())) throw OutOfDomainError("symbol query outside the oracle's caps");
  const double phi = phase_integral(*src_->model, p, src_->phase_opt).value;
  auto a0 = principal_symbol(phi, src_->energy);
  // exp(-i (Phi + shift) / 2k) as a product: adding the shift to Phi would
  // round it at the scale of |Phi|.
  if (src_->gauge) a0 *= principal_symbol(src_->gauge->shift(src_->energy.k(), p.omega()), src_->energy);
  return a0 * (1.0 + src_->remainder(p.y(), p.omega().vec()));
}

SymbolOracle SymbolOracle::restricted(std::vector<Cap> caps) const {
  SymbolOracle out = *this;
  out.restrictions_.push_back(std::move(caps));
  return out;
}

SymbolOracle make_synthetic_oracle(const PotentialModel& model, const Energy& energy, const PerturbationSpec& pert,
                                   std::optional<GaugePhase> gauge, PhaseOptions phase_opt) {
  return SymbolOracle(std::make_shared<const PotentialModel>(model), energy, pert, std::move(gauge), phase_opt);
}

SymbolOracle localized_oracle(const SymbolOracle& oracle, const Direction& omega0, double cap_radius) {
  if (!(cap_radius > 0.0) || cap_radius > std::numbers::pi / 4.0) {
    throw DomainError("cap radius must lie in (0, pi/4]");
  }
  return oracle.restricted({Cap{omega0, cap_radius}});
}

std::vector<Cap> caps_covering_circle(const Vec& f1, const Vec& f2, double cap_radius) {
  if (!(cap_radius > 0.0)) throw DomainError("cap radius must be positive");
  const int n = static_cast<int>(std::ceil(std::numbers::pi / cap_radius - 1e-12));
  std::vector<Cap> caps;
  for (int i = 0; i < n; ++i) {
    const double phi = 2.0 * std::numbers::pi * i / n;
    caps.push_back(Cap{Direction(f1 * std::cos(phi) + f2 * std::sin(phi)), cap_radius});
  }
  return caps;
}

double extract_directional(const SymbolOracle& oracle, const TangentPoint& p, const Vec& e, double h, int order) {
  if (!(h > 0.0)) throw DomainError("stencil step must be positive");
  if (order != 2 && order != 4) throw DomainError("stencil order must be 2 or 4");
  const Vec& omega = p.omega().vec();
  const Vec de = reject(e, omega);
  const double step = h * std::max(1.0, norm(p.y()));
  auto at = [&](double m) {
    const auto a = oracle.sample(TangentPoint(p.omega(), p.y() + de * (m * step)));
    if (a == 0.0) throw QuadratureError("symbol vanishes on the extraction stencil");
    return a;
  };
  // Central differences of log a; the ratios keep each log on the
  // principal branch.
  std::complex<double> dlog = std::log(at(1.0) / at(-1.0)) / (2.0 * step);
  if (order == 4) dlog = (4.0 * dlog - std::log(at(2.0) / at(-2.0)) / (4.0 * step)) / 3.0;
  return (std::complex<double>(0.0, 2.0 * oracle.energy().k()) * dlog).real();
}

Vec extract_grad_phase(const SymbolOracle& oracle, const TangentPoint& p, double h, int order) {
  Vec out(p.omega().dim());
  for (const auto& e : tangent_basis(p.omega())) out += e * extract_directional(oracle, p, e, h, order);
  return out;
}
}  // namespace lrisp
