#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include <CLI11.hpp>

#include "lrisp/errors.hpp"
#include "lrisp/io.hpp"
#include "lrisp/parallel.hpp"
#include "selftest.hpp"

namespace {

using namespace lrisp;
using io::json;

enum Exit { kOk = 0, kFailure = 1, kConfig = 2, kQuadrature = 3, kPartial = 4, kBound = 5 };

struct Flags {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  bool quiet = false;
};

class Log {
public:
  explicit Log(bool quiet) : quiet_(quiet) {}
  template <class... A>
  void operator()(const A&... parts) const {
    if (quiet_) return;
    ((std::cout << parts), ...);
    std::cout << '\n';
  }

private:
  bool quiet_;
};

io::RunConfig load_config(const Flags& f) {
  if (f.config.empty()) throw ConfigError("--config is required");
  std::ifstream in(f.config);
  if (!in) throw ConfigError("cannot read config " + f.config);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(f.config + ": malformed JSON: " + e.what());
  }
  auto cfg = io::run_config_from_json(j);
  if (f.seed) cfg.oracle.perturbation.seed = *f.seed;
  if (!f.out.empty()) cfg.output_dir = f.out;
  return cfg;
}

std::filesystem::path out_path(const io::RunConfig& cfg, const char* name) {
  return std::filesystem::path(cfg.output_dir) / name;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// --- forward ---------------------------------------------------------------------------

int cmd_forward(const Flags& f) {
  auto cfg = load_config(f);
  if (!cfg.forward) throw ConfigError("forward needs a \"forward\" grid in the config");
  if (f.tol) cfg.phase.tol.rel = *f.tol;
  const auto points = cfg.forward->points_list();
  std::vector<PhaseValue> values(points.size());
  parallel_for(points.size(), [&](std::size_t i) { values[i] = evaluate_phase(cfg.model, points[i], cfg.phase); },
               cfg.recon.threads);
  std::string csv = io::phase_csv_header(cfg.model.dim()) + "\n";
  for (std::size_t i = 0; i < points.size(); ++i) csv += io::phase_csv_row(points[i].omega(), points[i].y(), values[i]) + "\n";
  io::atomic_write(out_path(cfg, "phase.csv"), csv);
  Log(f.quiet)("wrote ", out_path(cfg, "phase.csv").string(), " (", points.size(), " rows)");
  return kOk;
}

// --- symbol-dump -------------------------------------------------------------------------

int cmd_symbol_dump(const Flags& f) {
  const auto cfg = load_config(f);
  const Log log(f.quiet);
  const auto oracle = io::make_oracle(cfg.model, cfg.oracle, cfg.phase);
  io::atomic_write(out_path(cfg, "oracle.json"), dump(io::to_json(cfg.oracle)));
  log("wrote ", out_path(cfg, "oracle.json").string());

  const auto src = oracle_gradient_source(oracle, cfg.recon.stencil, cfg.recon.stencil_order);
  if (cfg.forward) {
    const int d = cfg.model.dim();
    std::string csv;
    for (int i = 1; i <= d; ++i) csv += "omega_" + std::to_string(i) + ",";
    for (int i = 1; i <= d; ++i) csv += "y_" + std::to_string(i) + ",";
    csv += "re_a,im_a";
    for (int i = 1; i <= d; ++i) csv += ",grad_" + std::to_string(i);
    csv += "\n";
    for (const auto& p : cfg.forward->points_list()) {
      const auto a = oracle.sample(p);
      const Vec g = extract_grad_phase(oracle, p, cfg.recon.stencil, cfg.recon.stencil_order);
      std::vector<double> row;
      for (int i = 0; i < d; ++i) row.push_back(p.omega()[i]);
      for (int i = 0; i < d; ++i) row.push_back(p.y()[i]);
      row.push_back(a.real());
      row.push_back(a.imag());
      for (int i = 0; i < d; ++i) row.push_back(g[i]);
      csv += io::csv_row(row) + "\n";
    }
    io::atomic_write(out_path(cfg, "symbol.csv"), csv);
    log("wrote ", out_path(cfg, "symbol.csv").string());
  }

  Vec x(cfg.model.dim());
  x[0] = 1.0;
  if (!cfg.targets.empty()) x = cfg.targets.front();
  const ReconstructionFrame frame(x, cfg.recon.probe_rays);
  const auto& omegas = frame.probe_omegas();
  const auto& rays = frame.probe_rays();
  std::vector<std::optional<RaySamples>> slots(omegas.size());
  std::vector<HomogeneousDecomposition> per_ray(omegas.size());
  parallel_for(
      omegas.size(),
      [&](std::size_t k) {
        slots[k] = sample_ray(src, omegas[k], rays[k], rays[k], cfg.recon.detect_grid);
        per_ray[k] = detect_exponents(*slots[k], cfg.recon.detect);
      },
      cfg.recon.threads);
  std::vector<RaySamples> samples;
  for (auto& s : slots) samples.push_back(std::move(*s));
  const auto consensus = consensus_exponents(per_ray, cfg.recon.detect);
  std::vector<double> all = consensus.exponents;
  all.insert(all.end(), consensus.remainder_exponents.begin(), consensus.remainder_exponents.end());
  std::vector<KnownFit> fits;
  for (const auto& s : samples) fits.push_back(all.empty() ? KnownFit{} : fit_known_exponents(s, all));
  io::atomic_write(out_path(cfg, "decomposition.json"), dump(io::decomposition_to_json(consensus, samples, fits)));
  log("wrote ", out_path(cfg, "decomposition.json").string(), " (", consensus.exponents.size(), " long-range exponents)");

  if (!consensus.exponents.empty()) {
    HomogeneousDecomposition decomp;
    decomp.exponents = consensus.exponents;
    decomp.remainder_exponents = consensus.remainder_exponents;
    const auto sino = build_component_sinogram(oracle, frame, decomp, 0, cfg.recon);
    io::atomic_write(out_path(cfg, "sinogram.csv"), io::sinogram_csv(sino));
    io::atomic_write(out_path(cfg, "sinogram.json"), dump(io::sinogram_sidecar(sino)));
    log("wrote ", out_path(cfg, "sinogram.csv").string(), " (component 1 at target 1)");
  }
  return kOk;
}

// --- reconstruct / roundtrip ------------------------------------------------------------------

struct Run {
  io::RunConfig cfg;
  ReconstructionReport report;
};

Run run_pipeline(const Flags& f) {
  Run r{load_config(f), {}};
  if (r.cfg.targets.empty()) throw ConfigError("config has no targets");
  const auto oracle = io::make_oracle(r.cfg.model, r.cfg.oracle, r.cfg.phase);
  r.report = reconstruct_all(oracle, r.cfg.targets, r.cfg.recon);
  attach_ground_truth(r.report, r.cfg.model, r.cfg.recon.detect.gap_min);
  return r;
}

std::string opt_field(const std::optional<double>& v) { return v ? io::format_double(*v) : std::string(); }

double rel_error(const ComponentResult& c) {
  if (!c.true_value) return std::numeric_limits<double>::infinity();
  return std::abs(c.value - *c.true_value) / std::max(std::abs(*c.true_value), 1e-300);
}

std::string summary_csv(const ReconstructionReport& rep) {
  std::string csv = "target,j,rho_hat,V_hat,V_true_if_known,rel_err\n";
  for (std::size_t t = 0; t < rep.targets.size(); ++t) {
    for (const auto& c : rep.targets[t].components) {
      csv += std::to_string(t + 1) + "," + std::to_string(c.index) + "," + io::format_double(c.rho) + "," +
             io::format_double(c.value) + "," + opt_field(c.true_value) + "," +
             (c.true_value ? io::format_double(rel_error(c)) : std::string()) + "\n";
    }
  }
  return csv;
}

void write_report(const Run& r, const Log& log) {
  json rep = io::to_json(r.report);
  rep["config"] = io::to_json(r.cfg);
  rep["config"].erase("output_dir");
  json times{{"total", io::to_json(r.report.times)}, {"targets", json::array()}};
  for (const auto& t : r.report.targets) times["targets"].push_back(io::to_json(t.times));
  io::atomic_write(out_path(r.cfg, "report.json"), dump(rep));
  io::atomic_write(out_path(r.cfg, "summary.csv"), summary_csv(r.report));
  io::atomic_write(out_path(r.cfg, "timings.json"), dump(times));
  log("status: ", r.report.status);
  log("wrote ", out_path(r.cfg, "report.json").string(), ", summary.csv, timings.json");
}

bool any_failure(const ReconstructionReport& rep) {
  for (const auto& t : rep.targets)
    if (t.failure) return true;
  return false;
}

int cmd_reconstruct(const Flags& f) {
  const auto r = run_pipeline(f);
  write_report(r, Log(f.quiet));
  return any_failure(r.report) ? kPartial : kOk;
}

int cmd_roundtrip(const Flags& f) {
  auto r = run_pipeline(f);
  if (f.tol) r.cfg.roundtrip_bound = *f.tol;
  const Log log(f.quiet);
  write_report(r, log);

  // True terms with no detected component count as fully missed (rel_err 1).
  std::string csv = "target,j,rho_hat,V_hat,V_true,rel_err\n";
  double worst = 0.0;
  const auto& terms = r.cfg.model.terms();
  for (std::size_t t = 0; t < r.report.targets.size(); ++t) {
    const auto& target = r.report.targets[t];
    const Vec& x = target.x;
    for (const auto& c : target.components) {
      const double e = rel_error(c);
      worst = std::max(worst, e);
      csv += std::to_string(t + 1) + "," + std::to_string(c.index) + "," + io::format_double(c.rho) + "," +
             io::format_double(c.value) + "," + opt_field(c.true_value) + "," + io::format_double(e) + "\n";
    }
    for (const auto& term : terms) {
      bool matched = false;
      for (const auto& c : target.components)
        matched = matched || std::abs(c.rho - term.rho) <= r.cfg.recon.detect.gap_min;
      if (matched || target.failure) continue;
      worst = std::max(worst, 1.0);
      csv += std::to_string(t + 1) + ",," + io::format_double(term.rho) + ",0," + io::format_double(term.eval(x)) + ",1\n";
    }
  }
  if (any_failure(r.report)) worst = std::numeric_limits<double>::infinity();
  io::atomic_write(out_path(r.cfg, "errors.csv"), csv);
  std::printf("max rel_err %s (bound %s)\n", io::format_double(worst).c_str(),
              io::format_double(r.cfg.roundtrip_bound).c_str());
  if (any_failure(r.report)) return kPartial;
  return worst <= r.cfg.roundtrip_bound ? kOk : kBound;
}

// --- selftest -----------------------------------------------------------------------------------

int cmd_selftest(const Flags& f) {
  const auto checks = selftest::run_all();
  bool ok = true;
  for (const auto& c : checks) {
    ok = ok && c.passed;
    if (!f.quiet || !c.passed) {
      std::printf("%s  %-32s rel_err %.3e  tol %.0e\n", c.passed ? "PASS" : "FAIL", c.name.c_str(), c.rel_error,
                  c.tolerance);
    }
  }
  return ok ? kOk : kFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reconstruction of long-range potentials from scattering-symbol data"};
  app.require_subcommand(1);
  app.fallthrough();
  Flags flags;
  app.add_option("--config", flags.config, "Run configuration (JSON)");
  app.add_option("--out", flags.out, "Output directory (overrides the config)");
  app.add_option("--seed", flags.seed, "Perturbation seed (overrides the config)");
  app.add_option("--tol", flags.tol, "roundtrip: error bound; forward: relative phase tolerance");
  app.add_flag("--quiet", flags.quiet, "Only print failures and the roundtrip summary");

  int (*handler)(const Flags&) = nullptr;
  app.add_subcommand("forward", "Tabulate the phase and its gradient over the forward grid")
      ->callback([&] { handler = cmd_forward; });
  app.add_subcommand("symbol-dump", "Write oracle settings, probe-ray decomposition and a component sinogram")
      ->callback([&] { handler = cmd_symbol_dump; });
  app.add_subcommand("reconstruct", "Run the reconstruction pipeline on the configured targets")
      ->callback([&] { handler = cmd_reconstruct; });
  app.add_subcommand("roundtrip", "Reconstruct and compare with the ground-truth model")
      ->callback([&] { handler = cmd_roundtrip; });
  app.add_subcommand("selftest", "Closed-form checks: C(rho), B(rho), Gaussian Radon inversion")
      ->callback([&] { handler = cmd_selftest; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfig;
  }

  try {
    return handler(flags);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfig;
  } catch (const QuadratureError& e) {
    std::fprintf(stderr, "quadrature failure: %s\n", e.what());
    return kQuadrature;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kFailure;
  }
}
