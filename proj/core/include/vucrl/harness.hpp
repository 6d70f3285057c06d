#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vucrl/learner.hpp"
#include "vucrl/nonstationary.hpp"
#include "vucrl/oracle.hpp"

namespace vucrl {

/// How the environment of a replication is produced.
struct EnvironmentSpec {
  /// "abrupt", "gradual" or "file".
  std::string generator = "abrupt";
  std::size_t n_states = 4;
  std::size_t n_actions = 2;
  /// abrupt: number of evenly spaced changes and their size.
  std::size_t n_changes = 4;
  double change_magnitude = 0.1;
  /// gradual: total variation budget v_r + v_p.
  double budget = 0.5;
  /// file: serialized environment.
  std::string path;
};

/// Optional sweep dimensions; a present dimension must be non-empty.
struct SweepGrid {
  std::optional<std::vector<double>> budget;
  std::optional<std::vector<std::size_t>> n_changes;
  std::optional<std::vector<LearnerMode>> mode;
  std::optional<std::vector<std::size_t>> horizon;
};

struct ExperimentSpec {
  EnvironmentSpec environment;
  LearnerConfig learner;
  std::size_t horizon = 1000;
  std::vector<std::uint64_t> seeds{1};
  std::string out_dir = "vucrl-out";
  std::size_t workers = 1;
  /// Also report the per-step-gain regret.
  bool include_alt = false;
  SweepGrid grid;

  /// Throws std::invalid_argument on inconsistent fields.
  void validate() const;
};

/// Parses the JSON config format; unknown keys are rejected.
ExperimentSpec experiment_spec_from_json(std::string_view text);
ExperimentSpec load_experiment_spec(const std::string& path);

/// Seed streams split from a replication's root seed.
std::uint64_t environment_seed(std::uint64_t root);
std::uint64_t trajectory_seed(std::uint64_t root);

/// Builds the environment of one replication. File environments must match
/// the spec horizon.
NonstationaryMdp build_environment(const EnvironmentSpec& spec, std::size_t horizon,
                                   std::uint64_t root_seed);

/// One finished replication.
struct RunOutcome {
  std::uint64_t seed = 0;
  LearnerMode mode = LearnerMode::no_restart;
  std::size_t horizon = 0;
  double v_r = 0.0;
  double v_p = 0.0;
  std::size_t l_changes = 0;
  double regret = 0.0;
  std::optional<double> alt_regret;
  BoundCheck bound;
  std::size_t episodes = 0;
  std::size_t phases = 0;
};

/// Completes a learner config for a given environment: count-restart gets
/// L = number of changed steps when unset.
LearnerConfig resolve_config(const LearnerConfig& config, const NonstationaryMdp& env);

/// Runs one replication end to end; `record` and `report` receive the
/// artifacts when non-null.
RunOutcome run_replication(const NonstationaryMdp& env, const LearnerConfig& config,
                           std::uint64_t root_seed, bool include_alt,
                           RunRecord* record = nullptr, RegretReport* report = nullptr);

/// Per seed: environment, record, report and curve files plus summary.tsv in
/// spec.out_dir. Returns 0 on success, 1 if any replication failed (a
/// "<prefix>.failed" marker is written for it). Progress goes to `log`.
int cli_run(const ExperimentSpec& spec, std::ostream& log);

/// Cartesian product of the grid (missing dimensions take the base spec's
/// value) times seeds; writes sweep.tsv with one row per run.
int cli_sweep(const ExperimentSpec& spec, std::ostream& log);

enum class VerifyLevel { fast, full };
VerifyLevel verify_level_from_string(std::string_view name);

/// Runs the property suites and prints one PASS/FAIL line per property.
/// Returns 0 iff every property passed.
int cli_verify(VerifyLevel level, std::ostream& out);

}  // namespace vucrl
