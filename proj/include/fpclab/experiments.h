#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fpclab/adversary.h"
#include "fpclab/finite_field.h"
#include "fpclab/prppc.h"
#include "fpclab/serialize.h"
#include "fpclab/tardos.h"

namespace fpclab {

enum class ExperimentKind { kFpcSecurity, kFeasibleSample, kSsSecurityGame, kSolverAccuracy, kReidAttack, kNeighborGap };

const char* experiment_kind_name(ExperimentKind kind);
std::optional<ExperimentKind> parse_experiment_kind(std::string_view name);

/// One campaign. `d` is the Tardos code length for the code-based kinds
/// (derived from n, c, xi when unset) and the database width otherwise.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::kFpcSecurity;
  std::string name;
  std::uint64_t seed = 0;
  std::size_t trials = 100;

  std::size_t n = 50;
  std::optional<std::size_t> d;
  std::size_t c = 5;
  /// Rows handed to the adversary / pirates. Defaults to c.
  std::optional<std::size_t> coalition_size;
  std::optional<std::size_t> ell;
  /// ell = ceil(ell_factor * d) when ell is unset.
  double ell_factor = 100.0;
  double xi = 0.05;
  std::optional<double> code_threshold;
  double length_constant = 100.0;
  std::uint64_t modulus = kMersenne61;

  double epsilon = 1.0;
  double delta = 1e-3;
  double alpha = 1.0 / 3.0;
  double p_fail = 1.0 / 3.0;
  std::optional<std::size_t> sample_rows;
  bool allow_below_threshold = false;

  // ss-security-game
  std::optional<std::size_t> q;
  std::string attacker = "consistency";
  std::optional<std::string> x;

  // fpc-security: `trials` runs per strategy
  std::vector<PirateStrategy> strategies{PirateStrategy::kMajority, PirateStrategy::kMinority,
                                         PirateStrategy::kRandomFeasible, PirateStrategy::kInterleave};
  // feasible-sample
  FlipStrategy flip = FlipStrategy::kSampleConstantColumn;
  // solver-accuracy
  std::string solver = "gaussian";
  std::string problem = "ss";
  std::optional<double> accuracy_bound;
  // reid-attack, neighbor-gap
  AttackMode mode = AttackMode::kSecretSharing;
  std::string algorithm = "subsample";
  std::optional<std::size_t> spread_rows;
  std::optional<std::size_t> spread_per_row;
  double constant_value = 0.5;
  double success_bound = 0.6;
  std::optional<std::size_t> removed;

  /// Stop starting trials once this much wall-clock time has gone by.
  std::optional<double> time_budget_s;
  std::optional<std::string> output;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Throws ConfigInvalid listing every offending field.
ExperimentConfig parse_config(const Json& j);
ExperimentConfig load_config(const std::filesystem::path& path);
/// Full config with defaults filled in; parse_config(config_to_json(c)) == c.
Json config_to_json(const ExperimentConfig& cfg);
/// Field-level problems, empty when the config is runnable.
std::vector<std::string> config_diagnostics(const ExperimentConfig& cfg);

TardosParams tardos_params(const ExperimentConfig& cfg);
/// Pad length ell for the config's code.
std::size_t pad_length(const ExperimentConfig& cfg);

struct Check {
  std::string name;
  double statistic = 0.0;
  double bound = 0.0;
  /// "<=", ">=", "==", "<", ">"
  std::string relation;
  bool passed = false;
  std::string detail;
};

struct ExperimentReport {
  ExperimentConfig config;
  Json records = Json::array();
  Json aggregates = Json::object();
  std::vector<Check> checks;
  std::size_t completed_trials = 0;
  bool passed = false;
  /// Wall-clock; kept out of to_json so reports stay byte-identical.
  double seconds = 0.0;

  Json to_json() const;
  std::string to_csv() const;
};

struct RunOptions {
  /// 0 keeps the OpenMP default.
  int threads = 0;
};

ExperimentReport run_experiment(const ExperimentConfig& cfg, const RunOptions& options = {});

struct SweepResult {
  std::vector<ExperimentReport> reports;
  Json summary;
  std::string summary_csv;
};

/// reid-attack at each code length in `grid`, with c set to the Hoeffding
/// row count for the padded width. Throws ConfigInvalid on an empty grid.
SweepResult scaling_sweep(const ExperimentConfig& base, const std::vector<std::size_t>& grid,
                          const RunOptions& options = {});

/// Writes <stem>.json, <stem>.csv and <stem>.timing.json under dir.
void write_report(const ExperimentReport& report, const std::filesystem::path& dir, const std::string& stem);

}  // namespace fpclab
