#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vucrl/harness.hpp"

namespace {

struct Overrides {
  std::string config;
  std::vector<std::uint64_t> seeds;
  std::string out;
  std::optional<std::size_t> workers;
  std::string mode;
  std::optional<std::size_t> horizon;
};

void add_experiment_flags(CLI::App& command, Overrides& o) {
  command.add_option("--config", o.config, "JSON experiment config")->check(CLI::ExistingFile);
  command.add_option("--seed", o.seeds, "replication seeds (overrides the config)")
      ->delimiter(',');
  command.add_option("--out", o.out, "output directory");
  command.add_option("--workers", o.workers, "parallel workers")->check(CLI::PositiveNumber);
  command.add_option("--mode", o.mode,
                     "no-restart | variation-restart | count-restart | zero-variation-restart");
  command.add_option("--horizon", o.horizon, "horizon T")->check(CLI::PositiveNumber);
}

vucrl::ExperimentSpec resolve(const Overrides& o) {
  vucrl::ExperimentSpec spec =
      o.config.empty() ? vucrl::ExperimentSpec{} : vucrl::load_experiment_spec(o.config);
  if (!o.seeds.empty()) spec.seeds = o.seeds;
  if (!o.out.empty()) spec.out_dir = o.out;
  if (o.workers) spec.workers = *o.workers;
  if (!o.mode.empty()) {
    spec.learner.mode = vucrl::learner_mode_from_string(o.mode);
    if (spec.learner.mode != vucrl::LearnerMode::count_restart) spec.learner.l_changes.reset();
  }
  if (o.horizon) spec.horizon = *o.horizon;
  return spec;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Variation-aware UCRL workbench for non-stationary MDPs"};
  app.require_subcommand(1);

  Overrides run_flags;
  Overrides sweep_flags;
  auto* run = app.add_subcommand("run", "run the configured learner for each seed");
  add_experiment_flags(*run, run_flags);
  auto* sweep = app.add_subcommand("sweep", "run the Cartesian grid of the config");
  add_experiment_flags(*sweep, sweep_flags);
  std::string level = "fast";
  auto* verify = app.add_subcommand("verify", "run the property suites");
  verify->add_option("--verify-level", level, "fast | full")
      ->check(CLI::IsMember({"fast", "full"}));

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) return vucrl::cli_run(resolve(run_flags), std::cerr);
    if (*sweep) return vucrl::cli_sweep(resolve(sweep_flags), std::cerr);
    return vucrl::cli_verify(vucrl::verify_level_from_string(level), std::cout);
  } catch (const std::exception& e) {
    std::cerr << "vucrl: " << e.what() << '\n';
    return 2;
  }
}
