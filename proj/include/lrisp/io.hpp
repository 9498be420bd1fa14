#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "lrisp/reconstruct.hpp"

/// Serialization of models, oracle settings, decompositions, sinograms and
/// reports, plus the run configuration read by the command-line tool.
/// Readers reject unknown keys with ConfigError.
namespace lrisp::io {

using nlohmann::json;

/// Shortest decimal form that reads back to the same double ("%.17g").
std::string format_double(double v);
/// One CSV row with ',' separators and doubles in format_double form.
std::string csv_row(const std::vector<double>& values);

/// Writes to a temporary file in the same directory, then renames it
/// over `path`, so readers never see a partial file. Missing parent
/// directories are created.
void atomic_write(const std::filesystem::path& path, std::string_view content);

json to_json(const Vec& v);
Vec vec_from_json(const json& j, int dim = -1);

json to_json(const PotentialModel& model);
PotentialModel model_from_json(const json& j);
/// "P1", "P2", "P3" or "zero"; mode defaults to the fixture's own.
PotentialModel fixture_model(const std::string& name, std::optional<PotentialMode> mode = std::nullopt);

struct OracleConfig {
  double lambda = 1.0;
  PerturbationSpec perturbation;
  bool gauge = false;
  std::optional<Cap> cap;
};
json to_json(const OracleConfig& cfg);
OracleConfig oracle_config_from_json(const json& j, int dim);
/// Synthetic oracle for the model; the gauge pair comes from the model's
/// short-range term.
SymbolOracle make_oracle(const PotentialModel& model, const OracleConfig& cfg,
                         const PhaseOptions& phase_opt = {});

/// {"exponents", "remainder_slope", "conditioning", "rays": [{"omega", "u",
/// "e", "coeffs", "residual"}]}: consensus exponents, then each ray's fit
/// with those exponents.
json decomposition_to_json(const ExponentConsensus& consensus, const std::vector<RaySamples>& rays,
                           const std::vector<KnownFit>& fits);

/// Sinogram as CSV (theta, s, r) and its JSON sidecar (S and tails).
std::string sinogram_csv(const Sinogram& sino);
json sinogram_sidecar(const Sinogram& sino);
Sinogram sinogram_from_files(std::string_view csv, const json& sidecar);

/// Header and rows of the phase batch table: omega_1..d, y_1..d, phi,
/// grad_1..d, est_error.
std::string phase_csv_header(int dim);
std::string phase_csv_row(const Direction& omega, const Vec& y, const PhaseValue& phi);

json to_json(const ReconstructionReport& report);
json to_json(const StageTimes& times);

struct ForwardGrid {
  Vec omega;
  Vec direction;  // y = r * (direction projected onto the plane orthogonal to omega, normalized)
  double r_min = 1.0;
  double r_max = 100.0;
  int points = 10;
  /// Geometric radii r_min .. r_max.
  std::vector<TangentPoint> points_list() const;
};

struct RunConfig {
  std::string model_source;  // "fixture:P3" or "inline"
  PotentialModel model = fixtures::zero();
  OracleConfig oracle;
  ReconstructionConfig recon;
  std::vector<Vec> targets;
  std::optional<ForwardGrid> forward;
  PhaseOptions phase;
  double roundtrip_bound = 0.02;
  std::string output_dir = "out";
};

/// Parses and validates a run configuration. Throws ConfigError (including
/// for targets at the origin and unknown keys).
RunConfig run_config_from_json(const json& j);
/// Valid run configuration with the model inlined; reads back to the same
/// settings.
json to_json(const RunConfig& cfg);

}  // namespace lrisp::io
