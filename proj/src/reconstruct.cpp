#include "lrisp/reconstruct.hpp"

#include <chrono>
#include <cmath>
#include <numbers>

#include "lrisp/errors.hpp"
#include "lrisp/parallel.hpp"

namespace lrisp {

namespace {
constexpr double kPi = std::numbers::pi;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}
}  // namespace

// --- frame -----------------------------------------------------------------

ReconstructionFrame::ReconstructionFrame(const Vec& x, int probe_rays)
    : ReconstructionFrame(PlaneFrame::orthogonal_to(x), probe_rays) {}

ReconstructionFrame::ReconstructionFrame(const PlaneFrame& plane, int probe_rays)
    : plane_(plane), radius_(norm(plane.origin())), axis_(normalized(plane.origin())) {
  if (probe_rays < 1) throw DomainError("reconstruction frame: need at least one probe ray");
  make_probes(probe_rays);
}

void ReconstructionFrame::make_probes(int n) {
  for (int k = 0; k < n; ++k) {
    const double theta = kPi * (k + 0.5) / n;
    omegas_.push_back(omega(theta));
    rays_.push_back(normalized(axis_ + xi(theta) * 0.5));
  }
}

Vec ReconstructionFrame::xi(double theta) const { return plane_.embed(angle_direction(theta)); }
Direction ReconstructionFrame::omega(double theta) const { return Direction(plane_.embed(angle_normal(theta))); }
Vec ReconstructionFrame::point(double theta, double s, double scale) const {
  return plane_.origin() * scale + xi(theta) * s;
}

// --- coefficient field -------------------------------------------------------

CoefficientField::CoefficientField(std::vector<double> exponents, std::size_t angles, std::vector<double> psi_nodes,
                                   std::vector<double> values, std::vector<double> rel_errors, double condition)
    : exponents_(std::move(exponents)),
      angles_(angles),
      psi_nodes_(std::move(psi_nodes)),
      values_(std::move(values)),
      rel_errors_(std::move(rel_errors)),
      condition_(condition) {
  if (psi_nodes_.size() < 2 || values_.size() != exponents_.size() * angles_ * psi_nodes_.size()) {
    throw DomainError("coefficient field: inconsistent sizes");
  }
}

double CoefficientField::coefficient(std::size_t j, std::size_t m, double psi) const {
  if (j >= exponents_.size() || m >= angles_) throw std::out_of_range("coefficient field: index out of range");
  const double pm = psi_max();
  if (std::abs(psi) > pm * (1.0 + 1e-12)) throw DomainError("coefficient field: psi outside the fitted range");
  const std::size_t K = psi_nodes_.size();
  const double* f = values_.data() + (j * angles_ + m) * K;
  // Barycentric Chebyshev-Lobatto interpolation.
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    const double d = psi - psi_nodes_[k];
    if (d == 0.0) return f[k];
    double w = (k % 2 ? -1.0 : 1.0) / d;
    if (k == 0 || k + 1 == K) w *= 0.5;
    num += w * f[k];
    den += w;
  }
  return num / den;
}

CoefficientField fit_coefficient_field(const GradientSource& src, const ReconstructionFrame& frame,
                                       std::span<const double> exponents, std::span<const double> nuisance,
                                       const ReconstructionConfig& cfg) {
  const std::size_t N = exponents.size();
  const std::size_t M = static_cast<std::size_t>(cfg.radon.angles);
  const int K = cfg.chebyshev_nodes;
  if (K < 2) throw DomainError("coefficient field: need at least 2 Chebyshev nodes");
  std::vector<double> base(exponents.begin(), exponents.end());
  for (double e : nuisance) {
    bool distinct = e > 0.0;
    for (double r : exponents) distinct = distinct && std::abs(e - r) >= cfg.detect.gap_min;
    if (distinct) base.push_back(e);
  }
  const double psi_max = std::atan(cfg.radon.S / frame.radius());
  std::vector<double> nodes(K);
  for (int k = 0; k < K; ++k) nodes[k] = psi_max * std::cos(kPi * k / (K - 1));

  std::vector<double> values(N * M * K, 0.0), errors(N * M * K, 0.0), conds(M * K, 1.0);
  parallel_for(
      M * K,
      [&](std::size_t task) {
        const std::size_t m = task / K, k = task % K;
        const double theta = kPi * static_cast<double>(m) / static_cast<double>(M);
        const double psi = nodes[k];
        const Vec u = frame.axis() * std::cos(psi) + frame.xi(theta) * std::sin(psi);
        const auto samples = sample_ray(src, frame.omega(theta), u, frame.axis(), cfg.coefficient_grid);
        // Nuisance orders that make the design singular are dropped, fastest first.
        auto exps = base;
        for (;;) {
          try {
            const auto fit = fit_known_exponents(samples, exps);
            for (std::size_t j = 0; j < N; ++j) {
              values[(j * M + m) * K + k] = fit.coeffs[j];
              errors[(j * M + m) * K + k] = fit.std_errors[j];
            }
            conds[task] = fit.condition;
            return;
          } catch (const ConditioningError& e) {
            if (exps.size() <= N) {
              throw ConditioningError(std::string(e.what()) + " (sinogram angle theta=" + std::to_string(theta) +
                                          ", psi=" + std::to_string(psi) + ", offset s=" +
                                          std::to_string(frame.radius() * std::tan(psi)) + ")",
                                      e.condition_number);
            }
            exps.pop_back();
          }
        }
      },
      cfg.threads);

  std::vector<double> rel(N, 0.0);
  for (std::size_t j = 0; j < N; ++j) {
    double cmax = 0.0, emax = 0.0;
    for (std::size_t i = 0; i < M * K; ++i) {
      cmax = std::max(cmax, std::abs(values[j * M * K + i]));
      emax = std::max(emax, errors[j * M * K + i]);
    }
    rel[j] = cmax > 0.0 ? emax / cmax : 0.0;
  }
  double cond = 1.0;
  for (double c : conds) cond = std::max(cond, c);
  return CoefficientField(std::vector<double>(exponents.begin(), exponents.end()), M, std::move(nodes),
                          std::move(values), std::move(rel), cond);
}

Sinogram build_component_sinogram(const CoefficientField& field, const ReconstructionFrame& frame, std::size_t j,
                                  const RadonGrid& grid, double scale) {
  if (j >= field.exponents().size()) throw std::out_of_range("build_component_sinogram: component index");
  if (static_cast<std::size_t>(grid.angles) != field.angles()) {
    throw DomainError("build_component_sinogram: angle count differs from the coefficient field");
  }
  if (!(scale > 0.0)) throw DomainError("build_component_sinogram: scale must be positive");
  Sinogram sino;
  sino.angles = grid.angle_values();
  sino.offsets = grid.offset_values();
  for (double& s : sino.offsets) s *= scale;
  sino.S = grid.S * scale;
  sino.values.resize(sino.angles.size() * sino.offsets.size());
  const double rho = field.exponents()[j];
  const double r = frame.radius();
  for (std::size_t m = 0; m < sino.angles.size(); ++m) {
    for (std::size_t n = 0; n < sino.offsets.size(); ++n) {
      const double s = sino.offsets[n] / scale;  // offset of the undilated target
      const double psi = std::atan(s / r);
      const double c = field.coefficient(j, m, psi);
      sino.at(m, n) = c * std::pow(scale * scale * (r * r + s * s), -0.5 * rho);
    }
  }
  fit_tails(sino, grid.tail_fraction);
  return sino;
}

Sinogram build_component_sinogram(const SymbolOracle& oracle, const ReconstructionFrame& frame,
                                  const HomogeneousDecomposition& decomp, std::size_t j,
                                  const ReconstructionConfig& cfg) {
  const auto src = oracle_gradient_source(oracle, cfg.stencil, cfg.stencil_order);
  const auto field = fit_coefficient_field(src, frame, decomp.exponents, decomp.remainder_exponents, cfg);
  return build_component_sinogram(field, frame, j, cfg.radon);
}

InversionResult reconstruct_partial(const Sinogram& sino, double band, const InversionOptions& opt) {
  return invert_at_origin(sino, band, opt);
}

// --- radial integration -------------------------------------------------------

namespace {

/// -int_{r_0}^inf p(r) dr over the first `count` radii plus the tail.
double tail_integral(std::span<const double> r, std::span<const double> p, std::size_t count) {
  double acc = 0.0;
  double beta = 0.0;
  for (std::size_t i = 0; i + 1 < count; ++i) {
    const double ratio = r[i + 1] / r[i];
    if (p[i] != 0.0 && p[i + 1] / p[i] > 0.0) {
      // Exact for p = p_i (r / r_i)^{-beta} on the segment.
      beta = -std::log(p[i + 1] / p[i]) / std::log(ratio);
      acc += std::abs(1.0 - beta) < 1e-12 ? p[i] * r[i] * std::log(ratio)
                                          : p[i] * r[i] * (std::pow(ratio, 1.0 - beta) - 1.0) / (1.0 - beta);
    } else {
      beta = std::numeric_limits<double>::quiet_NaN();
      acc += 0.5 * (p[i] + p[i + 1]) * (r[i + 1] - r[i]);
    }
  }
  const double pl = p[count - 1];
  if (pl != 0.0) {
    if (!(beta > 1.0)) {
      throw QuadratureError("tail integral: partials do not decay faster than 1/r (fitted order " +
                            std::to_string(beta) + ")");
    }
    acc += pl * r[count - 1] / (beta - 1.0);
  }
  return -acc;
}

}  // namespace

ValueEstimate reconstruct_value(double rho, ValueMode mode, std::span<const double> radii,
                                std::span<const double> partials, std::span<const double> partial_errors) {
  if (!(rho > 0.0)) throw DomainError("reconstruct_value: order must be positive");
  if (radii.empty() || radii.size() != partials.size()) throw DomainError("reconstruct_value: radii/partials mismatch");
  if (!partial_errors.empty() && partial_errors.size() != partials.size()) {
    throw DomainError("reconstruct_value: partial error count mismatch");
  }
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0) || (i > 0 && !(radii[i] > radii[i - 1]))) {
      throw DomainError("reconstruct_value: radii must be positive and increasing");
    }
  }
  const double e0 = partial_errors.empty() ? 0.0 : partial_errors[0];
  if (mode == ValueMode::euler) {
    return {-radii[0] * partials[0] / rho, radii[0] * e0 / rho};
  }
  if (radii.size() < 2) throw DomainError("reconstruct_value: tail integral needs at least two radii");
  ValueEstimate out;
  out.value = tail_integral(radii, partials, radii.size());
  double rel = 0.0;
  for (std::size_t i = 0; i < partial_errors.size(); ++i)
    if (partials[i] != 0.0) rel = std::max(rel, partial_errors[i] / std::abs(partials[i]));
  out.error = std::abs(out.value) * rel;
  if (radii.size() >= 3) out.error += std::abs(out.value - tail_integral(radii, partials, radii.size() - 1));
  return out;
}

// --- pipeline -------------------------------------------------------------------

ReconstructionReport reconstruct_all(const SymbolOracle& oracle, const std::vector<Vec>& targets,
                                     const ReconstructionConfig& cfg) {
  ReconstructionReport report;
  const auto src = oracle_gradient_source(oracle, cfg.stencil, cfg.stencil_order);
  const std::size_t T = targets.size();
  const std::size_t P = static_cast<std::size_t>(cfg.probe_rays);

  std::vector<std::optional<ReconstructionFrame>> frames(T);
  report.targets.resize(T);
  for (std::size_t t = 0; t < T; ++t) {
    report.targets[t].x = targets[t];
    try {
      if (!(norm(targets[t]) > 0.0)) throw DomainError("target x = 0: the plane through x would contain the origin");
      frames[t].emplace(targets[t], cfg.probe_rays);
    } catch (const std::exception& e) {
      report.targets[t].failure = e.what();
    }
  }

  // Detection on the probe rays of every target.
  auto t0 = std::chrono::steady_clock::now();
  std::vector<std::optional<HomogeneousDecomposition>> decomps(T * P);
  std::vector<std::string> probe_errors(T * P);
  std::vector<double> magnitudes(T * P, 0.0);
  parallel_for(
      T * P,
      [&](std::size_t task) {
        const std::size_t t = task / P, k = task % P;
        if (!frames[t]) return;
        const auto& fr = *frames[t];
        try {
          const auto samples = sample_ray(src, fr.probe_omegas()[k], fr.probe_rays()[k], fr.axis(), cfg.detect_grid);
          for (double v : samples.values) magnitudes[task] = std::max(magnitudes[task], std::abs(v));
          decomps[task] = detect_exponents(samples, cfg.detect);
        } catch (const std::exception& e) {
          probe_errors[task] = std::string("probe ") + std::to_string(k) + ": " + e.what();
        }
      },
      cfg.threads);
  std::vector<HomogeneousDecomposition> all;
  for (std::size_t t = 0; t < T; ++t) {
    auto& tr = report.targets[t];
    for (std::size_t k = 0; k < P; ++k) {
      const std::size_t i = t * P + k;
      tr.data_magnitude = std::max(tr.data_magnitude, magnitudes[i]);
      if (!probe_errors[i].empty() && !tr.failure) tr.failure = "detection failed at " + probe_errors[i];
    }
    if (tr.failure) continue;
    for (std::size_t k = 0; k < P; ++k) {
      const auto& d = *decomps[t * P + k];
      for (const auto& w : d.warnings) tr.warnings.push_back("probe " + std::to_string(k) + ": " + w);
      all.push_back(d);
    }
  }
  const auto consensus = consensus_exponents(all, cfg.detect);
  report.exponents = consensus.exponents;
  report.exponent_spread = consensus.exponent_spread;
  report.remainder_exponents = consensus.remainder_exponents;
  report.remainder_slope = consensus.remainder_slope;
  const double detect_time = seconds_since(t0);
  report.times.detection = detect_time;

  const std::size_t N = consensus.exponents.size();
  const double band = cfg.radon.band;
  for (std::size_t t = 0; t < T; ++t) {
    auto& tr = report.targets[t];
    tr.times.detection = detect_time / std::max<std::size_t>(1, T);
    if (tr.failure || N == 0) continue;
    const auto& fr = *frames[t];
    try {
      auto t1 = std::chrono::steady_clock::now();
      const auto field =
          fit_coefficient_field(src, fr, consensus.exponents, consensus.remainder_exponents, cfg);
      tr.times.coefficients = seconds_since(t1);

      t1 = std::chrono::steady_clock::now();
      const std::size_t R = static_cast<std::size_t>(std::max(1, cfg.tail_radii));
      std::vector<double> scales(R);
      for (std::size_t i = 0; i < R; ++i) scales[i] = std::pow(cfg.tail_ratio, static_cast<double>(i));
      std::vector<InversionResult> inv(N * R);
      parallel_for(
          N * R,
          [&](std::size_t task) {
            const std::size_t j = task / R, i = task % R;
            const auto sino = build_component_sinogram(field, fr, j, cfg.radon, scales[i]);
            inv[task] = reconstruct_partial(sino, band / scales[i], cfg.inversion);
          },
          cfg.threads);
      tr.times.inversion = seconds_since(t1);

      t1 = std::chrono::steady_clock::now();
      for (std::size_t j = 0; j < N; ++j) {
        ComponentResult c;
        c.index = j + 1;
        c.rho = consensus.exponents[j];
        c.rho_spread = consensus.exponent_spread[j];
        std::vector<double> radii(R), partials(R), perr(R);
        for (std::size_t i = 0; i < R; ++i) {
          const auto& res = inv[j * R + i];
          radii[i] = fr.radius() * scales[i];
          partials[i] = res.value;
          perr[i] = std::hypot(res.error, std::abs(res.value) * field.relative_error(j));
        }
        c.partial = partials[0];
        c.partial_error = perr[0];
        const auto eu = reconstruct_value(c.rho, ValueMode::euler, radii, partials, perr);
        c.value_euler = eu.value;
        c.value = eu.value;
        c.error = std::hypot(eu.error, std::abs(eu.value) * c.rho_spread / c.rho);
        if (R >= 2) {
          try {
            c.value_tail = reconstruct_value(c.rho, ValueMode::tail_integral, radii, partials, perr).value;
            const double gap = std::abs(c.value_tail - c.value_euler);
            c.consistent = gap <= cfg.consistency_tol * std::abs(c.value_euler) || gap <= c.error;
            if (!c.consistent) {
              c.notes.push_back("Euler and tail-integral values differ by " +
                                std::to_string(100.0 * gap / std::max(std::abs(c.value_euler), 1e-300)) + "%");
            }
          } catch (const QuadratureError& e) {
            c.consistent = false;
            c.notes.push_back(std::string("tail integral failed: ") + e.what());
          }
        } else {
          c.value_tail = c.value_euler;
        }
        tr.components.push_back(std::move(c));
      }
      tr.times.integration = seconds_since(t1);
    } catch (const std::exception& e) {
      tr.failure = e.what();
      tr.components.clear();
    }
    report.times.coefficients += tr.times.coefficients;
    report.times.inversion += tr.times.inversion;
    report.times.integration += tr.times.integration;
  }

  std::string failed;
  for (std::size_t t = 0; t < T; ++t)
    if (report.targets[t].failure) failed += (failed.empty() ? "" : ", ") + std::to_string(t);
  if (!failed.empty()) {
    report.status = "failed targets: " + failed;
  } else if (N == 0) {
    report.status = "no long-range part detected";
  } else {
    report.status = "ok";
  }
  return report;
}

void attach_ground_truth(ReconstructionReport& report, const PotentialModel& model, double gap_min) {
  for (auto& tr : report.targets) {
    for (auto& c : tr.components) {
      const HomogeneousTerm* best = nullptr;
      for (const auto& term : model.terms()) {
        if (std::abs(term.rho - c.rho) < gap_min && (!best || std::abs(term.rho - c.rho) < std::abs(best->rho - c.rho))) {
          best = &term;
        }
      }
      if (!best) continue;
      c.true_value = best->eval(tr.x);
      c.true_partial = dot(best->grad(tr.x), normalized(tr.x));
    }
  }
}

}  // namespace lrisp
