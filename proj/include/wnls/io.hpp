#pragma once

// Run configuration and on-disk formats: WNLS1 field snapshots, diagnostic
// series as CSV, experiment reports as JSON.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "wnls/diagnostics.hpp"
#include "wnls/experiments.hpp"
#include "wnls/spectral.hpp"

namespace wnls {

struct RunConfig {
  int n = 64;
  std::uint64_t seed = 1;
  std::vector<std::uint64_t> seeds;  // convergence: median over several realizations
  double eps = 0.125;
  std::vector<double> eps_list;  // empty: the subcommand's default list
  std::string mollifier = "gaussian";
  int lambda = 0;
  double dt = 1e-3;
  double t_end = 1.0;
  int snapshot_every = 20;
  bool renormalized = true;
  bool dealias = true;
  double gamma = 1.5;
  double kappa = 0.1;
  double kappa_prime = 0.2;
  std::size_t samples = 200;
  std::uint64_t first_seed = 1000;
  double v0_norm = 0.5;
  std::uint64_t v0_seed = 7;
  bool force = false;
  std::string output_dir = ".";

  /// Non-fatal findings from validation, e.g. "mollifier unresolved by grid".
  std::vector<std::string> warnings;
  bool unresolved = false;

  Mollifier rho() const { return Mollifier::parse(mollifier); }
  SolverConfig solver() const;
  /// eps_list if set, otherwise {eps}.
  std::vector<double> scales() const;
};

/// Every key the config format accepts.
const std::vector<std::string>& config_keys();

/// Builds and validates a RunConfig from a JSON object. Unknown keys and
/// out-of-range values throw InvalidConfig naming the key.
RunConfig parse_config(const nlohmann::json& doc);

/// Reads a JSON config file and applies the overrides on top of it (keys in
/// overrides win). Either side may be empty.
RunConfig parse_config(const std::filesystem::path& path, const nlohmann::json& overrides);

/// Throws InvalidConfig with the offending key.
void validate(RunConfig& config);

/// Throws UnresolvedMollifier when a scale is below 4/n and force is off.
void enforce_resolution_policy(const RunConfig& config);

nlohmann::ordered_json to_json(const RunConfig& config);

// ---------------------------------------------------------------------------
// WNLS1 snapshots: one JSON header line, then n*n little-endian (re, im)
// double pairs with k1 = -n/2..n/2-1 outer and k2 inner.

inline constexpr const char* kSnapshotMagic = "WNLS1";
inline constexpr const char* kSnapshotLayout = "row-major k1-major centered";

void write_field_snapshot(const SpectralField& f, const std::filesystem::path& path);
void write_field_snapshot(const SpectralField& f, std::ostream& out);

/// Throws BadMagic, TruncatedPayload, HeaderMismatch or IoError.
SpectralField read_field_snapshot(const std::filesystem::path& path);
SpectralField read_field_snapshot(std::istream& in);

// ---------------------------------------------------------------------------

inline constexpr const char* kSeriesHeader = "t,mass_u,t_mass,t_energy,h1_v,h2_v,k_eps";

void write_series_csv(const DiagnosticSeries& series, const std::filesystem::path& path);
void write_series_csv(const DiagnosticSeries& series, std::ostream& out);
DiagnosticSeries read_series_csv(const std::filesystem::path& path);
DiagnosticSeries read_series_csv(std::istream& in);

nlohmann::ordered_json report_to_json(const ExperimentReport& report);
std::string render_report(const ExperimentReport& report);
void write_report_json(const ExperimentReport& report, const std::filesystem::path& path);

/// Writes text to path, creating parent directories. Throws IoError.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace wnls
