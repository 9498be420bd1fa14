#include "lrisp/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <numbers>
#include <sstream>
#include <system_error>
#include <unistd.h>

#include "lrisp/errors.hpp"

namespace lrisp::io {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_row(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += format_double(values[i]);
  }
  return out;
}

void atomic_write(const std::filesystem::path& path, std::string_view content) {
  const auto dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  std::filesystem::create_directories(dir);
  const auto tmp = dir / ("." + path.filename().string() + ".tmp" + std::to_string(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw std::runtime_error("write to " + tmp.string() + " failed");
    }
  }
  std::filesystem::rename(tmp, path);
}

// --- helpers -------------------------------------------------------------------

namespace {

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError(where + ": unknown key \"" + key + "\"");
  }
}

template <class T>
T get_or(const json& j, const char* key, T fallback, const std::string& where) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

template <class T>
T require(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + ": missing key \"" + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

}  // namespace

json to_json(const Vec& v) {
  json a = json::array();
  for (int i = 0; i < v.dim(); ++i) a.push_back(v[i]);
  return a;
}

Vec vec_from_json(const json& j, int dim) {
  if (!j.is_array()) throw ConfigError("expected an array of numbers");
  const int n = static_cast<int>(j.size());
  if (n < 1 || n > kMaxDim) throw ConfigError("vector length must be 1.." + std::to_string(kMaxDim));
  if (dim >= 0 && n != dim) throw ConfigError("vector length " + std::to_string(n) + " != dimension " + std::to_string(dim));
  Vec v(n);
  for (int i = 0; i < n; ++i) {
    if (!j[i].is_number()) throw ConfigError("expected an array of numbers");
    v[i] = j[i].get<double>();
  }
  return v;
}

// --- potential model -----------------------------------------------------------

json to_json(const PotentialModel& model) {
  json terms = json::array();
  for (const auto& t : model.terms()) {
    json prof{{"kind", t.profile.kind == Profile::Kind::radial ? "radial" : "axial"},
              {"coeffs", t.profile.coeffs}};
    prof["axis"] = t.profile.axis ? to_json(*t.profile.axis) : json(nullptr);
    terms.push_back({{"rho", t.rho}, {"profile", prof}, {"coupling", t.coupling}});
  }
  json j{{"dim", model.dim()}, {"terms", terms}, {"cutoff_radius", model.cutoff_radius()},
         {"mode", model.mode() == PotentialMode::bare ? "bare" : "cutoff"}};
  j["short_range"] =
      model.short_range() ? json{{"rho_sr", model.short_range()->rho_sr}, {"g", model.short_range()->g}} : json(nullptr);
  return j;
}

PotentialModel model_from_json(const json& j) {
  const std::string w = "model";
  check_keys(j, {"dim", "terms", "short_range", "cutoff_radius", "mode"}, w);
  const int dim = require<int>(j, "dim", w);
  std::vector<HomogeneousTerm> terms;
  if (j.contains("terms")) {
    if (!j.at("terms").is_array()) throw ConfigError("model.terms: expected an array");
    for (const auto& tj : j.at("terms")) {
      const std::string tw = w + ".terms[]";
      check_keys(tj, {"rho", "profile", "coupling"}, tw);
      HomogeneousTerm t;
      t.rho = require<double>(tj, "rho", tw);
      t.coupling = get_or<double>(tj, "coupling", 1.0, tw);
      if (tj.contains("profile")) {
        const auto& pj = tj.at("profile");
        check_keys(pj, {"kind", "axis", "coeffs"}, tw + ".profile");
        const auto kind = get_or<std::string>(pj, "kind", "radial", tw + ".profile");
        const auto coeffs = get_or<std::vector<double>>(pj, "coeffs", {1.0}, tw + ".profile");
        if (kind == "radial") {
          if (pj.contains("axis") && !pj.at("axis").is_null()) throw ConfigError(tw + ".profile: radial profiles take no axis");
          t.profile = Profile{Profile::Kind::radial, std::nullopt, coeffs};
        } else if (kind == "axial") {
          if (!pj.contains("axis") || pj.at("axis").is_null()) throw ConfigError(tw + ".profile: axial profile needs an axis");
          t.profile = Profile::axial(vec_from_json(pj.at("axis"), dim), coeffs);
        } else {
          throw ConfigError(tw + ".profile.kind must be \"radial\" or \"axial\"");
        }
      }
      terms.push_back(t);
    }
  }
  std::optional<ShortRangeTerm> sr;
  if (j.contains("short_range") && !j.at("short_range").is_null()) {
    const auto& sj = j.at("short_range");
    check_keys(sj, {"rho_sr", "g"}, w + ".short_range");
    sr = ShortRangeTerm{get_or<double>(sj, "rho_sr", 2.0, w + ".short_range"),
                        get_or<double>(sj, "g", 1.0, w + ".short_range")};
  }
  const auto mode_s = get_or<std::string>(j, "mode", "cutoff", w);
  if (mode_s != "bare" && mode_s != "cutoff") throw ConfigError("model.mode must be \"bare\" or \"cutoff\"");
  try {
    return PotentialModel(dim, terms, sr, get_or<double>(j, "cutoff_radius", 1.0, w),
                          mode_s == "bare" ? PotentialMode::bare : PotentialMode::cutoff);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("model: ") + e.what());
  }
}

PotentialModel fixture_model(const std::string& name, std::optional<PotentialMode> mode) {
  if (name == "P1") return mode ? fixtures::p1(*mode) : fixtures::p1();
  if (name == "P2") return mode ? fixtures::p2(*mode) : fixtures::p2();
  if (name == "P3") return mode ? fixtures::p3(*mode) : fixtures::p3();
  if (name == "zero") return fixtures::zero();
  throw ConfigError("unknown fixture \"" + name + "\" (expected P1, P2, P3 or zero)");
}

// --- oracle ----------------------------------------------------------------------

json to_json(const OracleConfig& cfg) {
  json pert{{"eps", cfg.perturbation.eps}, {"seed", cfg.perturbation.seed}};
  pert["p_b"] = cfg.perturbation.p_b ? json(*cfg.perturbation.p_b) : json(nullptr);
  json j{{"lambda", cfg.lambda}, {"perturbation", pert}, {"gauge", cfg.gauge}};
  j["cap"] = cfg.cap ? json{{"omega0", to_json(cfg.cap->center.vec())}, {"radius", cfg.cap->radius}} : json(nullptr);
  return j;
}

OracleConfig oracle_config_from_json(const json& j, int dim) {
  const std::string w = "oracle";
  check_keys(j, {"lambda", "perturbation", "gauge", "cap"}, w);
  OracleConfig cfg;
  cfg.lambda = get_or<double>(j, "lambda", 1.0, w);
  if (!(cfg.lambda > 0.0)) throw ConfigError("oracle.lambda must be positive");
  if (j.contains("perturbation") && !j.at("perturbation").is_null()) {
    const auto& pj = j.at("perturbation");
    check_keys(pj, {"eps", "p_b", "seed"}, w + ".perturbation");
    cfg.perturbation.eps = get_or<double>(pj, "eps", 0.0, w + ".perturbation");
    if (pj.contains("p_b") && !pj.at("p_b").is_null()) cfg.perturbation.p_b = require<double>(pj, "p_b", w);
    cfg.perturbation.seed = get_or<std::uint64_t>(pj, "seed", 0, w + ".perturbation");
    if (cfg.perturbation.eps < 0.0) throw ConfigError("oracle.perturbation.eps must be non-negative");
    if (cfg.perturbation.p_b && !(*cfg.perturbation.p_b > 0.0)) throw ConfigError("oracle.perturbation.p_b must be positive");
  }
  cfg.gauge = get_or<bool>(j, "gauge", false, w);
  if (j.contains("cap") && !j.at("cap").is_null()) {
    const auto& cj = j.at("cap");
    check_keys(cj, {"omega0", "radius"}, w + ".cap");
    const Vec c = vec_from_json(require<json>(cj, "omega0", w + ".cap"), dim);
    const double r = require<double>(cj, "radius", w + ".cap");
    if (!(r > 0.0) || r > std::numbers::pi / 4.0) throw ConfigError("oracle.cap.radius must lie in (0, pi/4]");
    if (!(norm(c) > 0.0)) throw ConfigError("oracle.cap.omega0 must be nonzero");
    cfg.cap = Cap{Direction(c), r};
  }
  return cfg;
}

SymbolOracle make_oracle(const PotentialModel& model, const OracleConfig& cfg, const PhaseOptions& phase_opt) {
  std::optional<GaugePhase> gauge;
  if (cfg.gauge) {
    gauge = model.short_range() ? GaugePhase::from_short_range(*model.short_range(), phase_opt) : GaugePhase::none();
  }
  auto oracle = make_synthetic_oracle(model, Energy(cfg.lambda), cfg.perturbation, gauge, phase_opt);
  if (cfg.cap) oracle = localized_oracle(oracle, cfg.cap->center, cfg.cap->radius);
  return oracle;
}

// --- decomposition & sinogram ---------------------------------------------------------

json decomposition_to_json(const ExponentConsensus& consensus, const std::vector<RaySamples>& rays,
                           const std::vector<KnownFit>& fits) {
  if (rays.size() != fits.size()) throw DomainError("decomposition_to_json: one fit per ray expected");
  json rj = json::array();
  for (std::size_t i = 0; i < rays.size(); ++i) {
    rj.push_back({{"omega", to_json(rays[i].omega.vec())},
                  {"u", to_json(rays[i].u)},
                  {"e", to_json(rays[i].e)},
                  {"coeffs", fits[i].coeffs},
                  {"residual", fits[i].residual}});
  }
  const double slope = std::isfinite(consensus.remainder_slope) ? consensus.remainder_slope : -1e300;
  return {{"exponents", consensus.exponents},
          {"remainder_slope", slope},
          {"conditioning", consensus.conditioning},
          {"rays", rj}};
}

std::string sinogram_csv(const Sinogram& sino) {
  std::string out = "theta,s,r\n";
  for (std::size_t m = 0; m < sino.angles.size(); ++m)
    for (std::size_t n = 0; n < sino.offsets.size(); ++n)
      out += csv_row({sino.angles[m], sino.offsets[n], sino.at(m, n)}) + "\n";
  return out;
}

json sinogram_sidecar(const Sinogram& sino) {
  json tails = json::array();
  for (std::size_t m = 0; m < sino.tails.size(); ++m) {
    const auto& t = sino.tails[m];
    tails.push_back({{"theta", sino.angles[m]}, {"c_plus", t.c_plus}, {"c_minus", t.c_minus}, {"gamma", t.gamma}});
  }
  return {{"S", sino.S}, {"tails", tails}};
}

Sinogram sinogram_from_files(std::string_view csv, const json& sidecar) {
  check_keys(sidecar, {"S", "tails"}, "sinogram sidecar");
  Sinogram sino;
  sino.S = require<double>(sidecar, "S", "sinogram sidecar");
  std::istringstream in{std::string(csv)};
  std::string line;
  if (!std::getline(in, line) || line != "theta,s,r") throw ConfigError("sinogram CSV: expected header theta,s,r");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    double th, s, r;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &th, &s, &r) != 3) throw ConfigError("sinogram CSV: bad row \"" + line + "\"");
    if (sino.angles.empty() || sino.angles.back() != th) sino.angles.push_back(th);
    if (sino.angles.size() == 1) sino.offsets.push_back(s);
    sino.values.push_back(r);
  }
  for (const auto& tj : sidecar.at("tails")) {
    check_keys(tj, {"theta", "c_plus", "c_minus", "gamma"}, "sinogram sidecar tails[]");
    sino.tails.push_back({require<double>(tj, "c_plus", "tail"), require<double>(tj, "c_minus", "tail"),
                          require<double>(tj, "gamma", "tail")});
  }
  try {
    sino.validate();
  } catch (const DomainError& e) {
    throw ConfigError(std::string("sinogram files: ") + e.what());
  }
  return sino;
}

// --- phase table -------------------------------------------------------------------------

std::string phase_csv_header(int dim) {
  std::string h;
  for (int i = 1; i <= dim; ++i) h += "omega_" + std::to_string(i) + ",";
  for (int i = 1; i <= dim; ++i) h += "y_" + std::to_string(i) + ",";
  h += "phi,";
  for (int i = 1; i <= dim; ++i) h += "grad_" + std::to_string(i) + ",";
  return h + "est_error";
}

std::string phase_csv_row(const Direction& omega, const Vec& y, const PhaseValue& phi) {
  std::vector<double> row;
  for (int i = 0; i < omega.dim(); ++i) row.push_back(omega[i]);
  for (int i = 0; i < y.dim(); ++i) row.push_back(y[i]);
  row.push_back(phi.value);
  for (int i = 0; i < phi.grad.dim(); ++i) row.push_back(phi.grad[i]);
  row.push_back(phi.est_error);
  return csv_row(row);
}

// --- report --------------------------------------------------------------------------------

namespace {
json opt_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }
json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }
}  // namespace

json to_json(const StageTimes& t) {
  return {{"detection_s", t.detection},
          {"coefficients_s", t.coefficients},
          {"inversion_s", t.inversion},
          {"integration_s", t.integration}};
}

json to_json(const ReconstructionReport& report) {
  json targets = json::array();
  for (const auto& t : report.targets) {
    json comps = json::array();
    for (const auto& c : t.components) {
      comps.push_back({{"j", c.index},
                       {"rho_hat", c.rho},
                       {"rho_spread", c.rho_spread},
                       {"partial", c.partial},
                       {"partial_error", c.partial_error},
                       {"value", c.value},
                       {"value_euler", c.value_euler},
                       {"value_tail_integral", c.value_tail},
                       {"error", c.error},
                       {"consistent", c.consistent},
                       {"true_value", opt_number(c.true_value)},
                       {"true_partial", opt_number(c.true_partial)},
                       {"notes", c.notes}});
    }
    targets.push_back({{"x", to_json(t.x)},
                       {"components", comps},
                       {"data_magnitude", t.data_magnitude},
                       {"failure", t.failure ? json(*t.failure) : json(nullptr)},
                       {"warnings", t.warnings}});
  }
  return {{"status", report.status},
          {"N_hat", report.exponents.size()},
          {"exponents", report.exponents},
          {"exponent_spread", report.exponent_spread},
          {"remainder_exponents", report.remainder_exponents},
          {"remainder_slope", finite_or_null(report.remainder_slope)},
          {"targets", targets}};
}

// --- run configuration ---------------------------------------------------------------------

std::vector<TangentPoint> ForwardGrid::points_list() const {
  if (points < 1) throw ConfigError("forward.points must be >= 1");
  if (!(r_min > 0.0) || r_max < r_min) throw ConfigError("forward: need 0 < r_min <= r_max");
  const Direction om(omega);
  const Vec dir = reject(direction, om.vec());
  if (!(norm(dir) > 1e-12)) throw ConfigError("forward.direction must not be parallel to omega");
  const Vec u = normalized(dir);
  std::vector<TangentPoint> out;
  for (int i = 0; i < points; ++i) {
    const double r = points == 1 ? r_min : r_min * std::pow(r_max / r_min, static_cast<double>(i) / (points - 1));
    out.emplace_back(om, u * r);
  }
  return out;
}

RunConfig run_config_from_json(const json& j) {
  try {
    check_keys(j, {"model", "fixture", "fixture_mode", "oracle", "separation", "radon", "integration", "targets",
                   "forward", "tolerances", "output_dir", "seed"},
               "config");
    RunConfig cfg;
    const bool has_model = j.contains("model"), has_fixture = j.contains("fixture");
    if (has_model == has_fixture) throw ConfigError("config: give exactly one of \"model\" and \"fixture\"");
    if (has_fixture) {
      std::optional<PotentialMode> mode;
      if (j.contains("fixture_mode")) {
        const auto m = require<std::string>(j, "fixture_mode", "config");
        if (m != "bare" && m != "cutoff") throw ConfigError("config.fixture_mode must be \"bare\" or \"cutoff\"");
        mode = m == "bare" ? PotentialMode::bare : PotentialMode::cutoff;
      }
      const auto name = require<std::string>(j, "fixture", "config");
      cfg.model = fixture_model(name, mode);
      cfg.model_source = "fixture:" + name;
    } else {
      if (j.contains("fixture_mode")) throw ConfigError("config: fixture_mode needs a fixture");
      cfg.model = model_from_json(j.at("model"));
      cfg.model_source = "inline";
    }
    const int dim = cfg.model.dim();
    if (j.contains("oracle")) cfg.oracle = oracle_config_from_json(j.at("oracle"), dim);
    if (j.contains("seed")) cfg.oracle.perturbation.seed = require<std::uint64_t>(j, "seed", "config");

    auto& rc = cfg.recon;
    if (j.contains("separation")) {
      const auto& sj = j.at("separation");
      const std::string w = "separation";
      check_keys(sj, {"s_min", "s_max", "points", "coefficient_points", "probe_rays", "chebyshev_nodes", "delta",
                      "gap_min", "stencil"},
                 w);
      rc.detect_grid.s_min = rc.coefficient_grid.s_min = get_or<double>(sj, "s_min", 10.0, w);
      rc.detect_grid.s_max = rc.coefficient_grid.s_max = get_or<double>(sj, "s_max", 1e4, w);
      rc.detect_grid.points = get_or<int>(sj, "points", 64, w);
      rc.coefficient_grid.points = get_or<int>(sj, "coefficient_points", 24, w);
      rc.probe_rays = get_or<int>(sj, "probe_rays", 8, w);
      rc.chebyshev_nodes = get_or<int>(sj, "chebyshev_nodes", 33, w);
      rc.detect.delta = get_or<double>(sj, "delta", 0.05, w);
      rc.detect.gap_min = get_or<double>(sj, "gap_min", 0.05, w);
      rc.stencil = get_or<double>(sj, "stencil", kDefaultStencil, w);
      if (!(rc.detect_grid.s_min > 0.0) || !(rc.detect_grid.s_max > rc.detect_grid.s_min)) {
        throw ConfigError("separation: need 0 < s_min < s_max");
      }
      if (rc.detect_grid.points < 8 || rc.coefficient_grid.points < 4) throw ConfigError("separation: too few grid points");
      if (rc.probe_rays < 1 || rc.chebyshev_nodes < 2) throw ConfigError("separation: probe_rays >= 1, chebyshev_nodes >= 2");
      if (!(rc.stencil > 0.0)) throw ConfigError("separation.stencil must be positive");
    }
    if (j.contains("radon")) {
      const auto& rj = j.at("radon");
      const std::string w = "radon";
      check_keys(rj, {"angles", "offsets", "S", "band", "radial_nodes", "tail_fraction"}, w);
      rc.radon.angles = get_or<int>(rj, "angles", 32, w);
      rc.radon.offsets = get_or<int>(rj, "offsets", 257, w);
      rc.radon.S = get_or<double>(rj, "S", 40.0, w);
      rc.radon.band = get_or<double>(rj, "band", 8.0, w);
      rc.radon.radial_nodes = rc.inversion.radial_nodes = get_or<int>(rj, "radial_nodes", 64, w);
      rc.radon.tail_fraction = get_or<double>(rj, "tail_fraction", 0.2, w);
      if (rc.radon.angles < 2 || rc.radon.offsets < 9 || !(rc.radon.S > 0.0) || !(rc.radon.band > 0.0) ||
          rc.radon.radial_nodes < 4 || !(rc.radon.tail_fraction > 0.0 && rc.radon.tail_fraction < 1.0)) {
        throw ConfigError("radon: invalid grid");
      }
    }
    if (j.contains("integration")) {
      const auto& ij = j.at("integration");
      const std::string w = "integration";
      check_keys(ij, {"tail_radii", "tail_ratio", "consistency_tol", "extrapolate"}, w);
      rc.tail_radii = get_or<int>(ij, "tail_radii", 5, w);
      rc.tail_ratio = get_or<double>(ij, "tail_ratio", 2.0, w);
      rc.consistency_tol = get_or<double>(ij, "consistency_tol", 0.05, w);
      rc.inversion.extrapolate = get_or<bool>(ij, "extrapolate", true, w);
      if (rc.tail_radii < 1 || !(rc.tail_ratio > 1.0)) throw ConfigError("integration: tail_radii >= 1, tail_ratio > 1");
    }
    if (j.contains("targets")) {
      if (!j.at("targets").is_array()) throw ConfigError("config.targets: expected an array of points");
      for (const auto& tj : j.at("targets")) {
        const Vec x = vec_from_json(tj, dim);
        if (!(norm(x) > 0.0)) throw ConfigError("config.targets: target x = 0 is not allowed");
        cfg.targets.push_back(x);
      }
    }
    if (j.contains("forward")) {
      const auto& fj = j.at("forward");
      const std::string w = "forward";
      check_keys(fj, {"omega", "direction", "r_min", "r_max", "points"}, w);
      ForwardGrid fg{vec_from_json(require<json>(fj, "omega", w), dim), vec_from_json(require<json>(fj, "direction", w), dim),
                     get_or<double>(fj, "r_min", 1.0, w), get_or<double>(fj, "r_max", 100.0, w),
                     get_or<int>(fj, "points", 10, w)};
      if (!(norm(fg.omega) > 0.0)) throw ConfigError("forward.omega must be nonzero");
      fg.points_list();
      cfg.forward = fg;
    }
    if (j.contains("tolerances")) {
      const auto& tj = j.at("tolerances");
      const std::string w = "tolerances";
      check_keys(tj, {"phase_abs", "phase_rel", "roundtrip_bound"}, w);
      cfg.phase.tol.abs = get_or<double>(tj, "phase_abs", cfg.phase.tol.abs, w);
      cfg.phase.tol.rel = get_or<double>(tj, "phase_rel", cfg.phase.tol.rel, w);
      cfg.roundtrip_bound = get_or<double>(tj, "roundtrip_bound", 0.02, w);
      if (!(cfg.phase.tol.abs > 0.0) || !(cfg.phase.tol.rel > 0.0) || !(cfg.roundtrip_bound > 0.0)) {
        throw ConfigError("tolerances must be positive");
      }
    }
    cfg.output_dir = get_or<std::string>(j, "output_dir", "out", "config");
    return cfg;
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  } catch (const json::exception& e) {
    throw ConfigError(e.what());
  }
}

json to_json(const RunConfig& cfg) {
  const auto& rc = cfg.recon;
  json targets = json::array();
  for (const auto& x : cfg.targets) targets.push_back(to_json(x));
  json j{{"model", to_json(cfg.model)},
         {"oracle", to_json(cfg.oracle)},
         {"separation",
          {{"s_min", rc.detect_grid.s_min},
           {"s_max", rc.detect_grid.s_max},
           {"points", rc.detect_grid.points},
           {"coefficient_points", rc.coefficient_grid.points},
           {"probe_rays", rc.probe_rays},
           {"chebyshev_nodes", rc.chebyshev_nodes},
           {"delta", rc.detect.delta},
           {"gap_min", rc.detect.gap_min},
           {"stencil", rc.stencil}}},
         {"radon",
          {{"angles", rc.radon.angles},
           {"offsets", rc.radon.offsets},
           {"S", rc.radon.S},
           {"band", rc.radon.band},
           {"radial_nodes", rc.radon.radial_nodes},
           {"tail_fraction", rc.radon.tail_fraction}}},
         {"integration",
          {{"tail_radii", rc.tail_radii},
           {"tail_ratio", rc.tail_ratio},
           {"consistency_tol", rc.consistency_tol},
           {"extrapolate", rc.inversion.extrapolate}}},
         {"targets", targets},
         {"tolerances",
          {{"phase_abs", cfg.phase.tol.abs}, {"phase_rel", cfg.phase.tol.rel}, {"roundtrip_bound", cfg.roundtrip_bound}}},
         {"output_dir", cfg.output_dir}};
  if (cfg.forward) {
    j["forward"] = {{"omega", to_json(cfg.forward->omega)},
                    {"direction", to_json(cfg.forward->direction)},
                    {"r_min", cfg.forward->r_min},
                    {"r_max", cfg.forward->r_max},
                    {"points", cfg.forward->points}};
  }
  return j;
}

}  // namespace lrisp::io
