#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "nlsconserve/dynamics.hpp"
#include "nlsconserve/field.hpp"
#include "nlsconserve/nonlinearity.hpp"
#include "nlsconserve/verify.hpp"

namespace nls {

/// Config or input validation failure; maps to process exit status 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Initial data selectors.
struct GaussianInitial {
  double width = 1.0;
  double amplitude = 1.0;
  std::vector<double> center;   // empty = origin
  std::vector<double> phase_k;  // empty = no carrier
};
struct PlaneWaveInitial {
  double amplitude_re = 1.0;
  double amplitude_im = 0.0;
  std::vector<double> k;
};
struct SolitonInitial {
  double boost_k = 0.0;  // sech(x) e^{i k x}; k snapped to the lattice
};
struct FieldFileInitial {
  std::string path;
};
using InitialSpec =
    std::variant<GaussianInitial, PlaneWaveInitial, SolitonInitial, FieldFileInitial>;

struct ExperimentConfig {
  int d = 1;
  int n = 256;
  double L = 40.0;
  double lambda = 1.0;
  double p = 3.0;
  InitialSpec initial = GaussianInitial{};
  SolverConfig solver;
  std::vector<std::string> checks;
  std::string json_path;  // directory; one JSON file per identity
  std::string csv_path;
  int refinement_levels = 1;
  EnergyReference energy_reference = EnergyReference::initial;
};

/// Parses either flat `section.key = value` text or a JSON document with the
/// same schema (chosen by content). Throws ConfigError.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

/// Full validation beyond parsing: exponent range against the grid,
/// lattice-compatible wave vectors, registered check names. Throws ConfigError.
void validate_config(const ExperimentConfig& config, bool require_checks);

ComplexField build_initial_state(const ExperimentConfig& config);
PowerNonlinearity build_nonlinearity(const ExperimentConfig& config);
RunParams run_params(const ExperimentConfig& config);

// Process exit statuses shared by the library entry points and the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitBlowup = 3;

struct ExperimentResult {
  int status = kExitOk;
  Trajectory trajectory;
  std::vector<IdentityReport> reports;
  std::vector<std::string> messages;  // human-readable summary lines
};

/// simulate: evolve + CSV. verify: simulate + requested checks + one JSON per
/// identity. Outputs land in config.csv_path / config.json_path; empty paths
/// suppress the corresponding file.
ExperimentResult run_simulate(const ExperimentConfig& config);
ExperimentResult run_verify(const ExperimentConfig& config);

/// Reruns `levels` times with dt halved per level, writes the per-identity
/// residual table (CSV) next to the reports, fits convergence orders, and
/// stores them in every finest-level report. Level runs are independent and
/// executed on up to NLS_CONSERVE_THREADS workers (default: sequential).
struct ConvergenceRow {
  std::string identity;
  std::vector<double> residuals;  // one per level, max normalized residual
  std::optional<double> fitted_order;
  bool saturated = false;
};
struct ConvergenceResult {
  int status = kExitOk;
  std::vector<ConvergenceRow> rows;
  std::vector<IdentityReport> finest_reports;
  std::vector<std::string> messages;
};
ConvergenceResult run_convergence(const ExperimentConfig& config, int levels);

/// Registry dump for the CLI (name + description per registered identity).
std::vector<std::string> list_identities_lines();

/// Worker cap from NLS_CONSERVE_THREADS (>= 1); 1 when unset or invalid.
int thread_cap();

}  // namespace nls
