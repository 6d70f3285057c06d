#include "vucrl/harness.hpp"

#include <atomic>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json_support.hpp"
#include "text_format.hpp"
#include "vucrl/errors.hpp"
#include "vucrl/record_io.hpp"
#include "vucrl/regret_bounds.hpp"

namespace vucrl {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void reject_unknown_keys(const json& object, std::initializer_list<std::string_view> allowed,
                         std::string_view where) {
  for (const auto& item : object.items()) {
    bool known = false;
    for (auto key : allowed) known = known || item.key() == key;
    if (!known) {
      throw FormatError("unknown key '" + item.key() + "' in " + std::string(where));
    }
  }
}

template <typename T>
void read_if(const json& object, const char* key, T& target) {
  if (object.contains(key)) target = object.at(key).get<T>();
}

template <typename T>
std::optional<std::vector<T>> read_dimension(const json& grid, const char* key) {
  if (!grid.contains(key)) return std::nullopt;
  return grid.at(key).get<std::vector<T>>();
}

// Runs job(i) for i in [0, n) on up to `workers` threads and returns the
// per-index error messages (empty on success).
std::vector<std::string> parallel_for(std::size_t n, std::size_t workers,
                                      const std::function<void(std::size_t)>& job) {
  std::vector<std::string> errors(n);
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        job(i);
      } catch (const std::exception& e) {
        errors[i] = e.what();
        if (errors[i].empty()) errors[i] = "unknown error";
      }
    }
  };
  const std::size_t count = std::max<std::size_t>(1, std::min(workers, n));
  if (count == 1) {
    worker();
    return errors;
  }
  std::vector<std::thread> threads;
  for (std::size_t i = 0; i < count; ++i) threads.emplace_back(worker);
  for (auto& thread : threads) thread.join();
  return errors;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  if (!out.flush()) throw std::runtime_error("failed writing " + path.string());
}

std::string optional_text(const std::optional<double>& value) {
  return value ? exact_text(*value) : "-";
}

}  // namespace

void ExperimentSpec::validate() const {
  const auto& env = environment;
  if (env.generator != "abrupt" && env.generator != "gradual" && env.generator != "file") {
    throw std::invalid_argument("unknown environment generator '" + env.generator + "'");
  }
  if (env.generator == "file") {
    if (env.path.empty() || !fs::exists(env.path)) {
      throw std::invalid_argument("environment file '" + env.path + "' does not exist");
    }
  } else if (env.n_states == 0 || env.n_actions == 0) {
    throw std::invalid_argument("environment needs at least one state and action");
  }
  if (horizon == 0) throw std::invalid_argument("horizon must be positive");
  if (seeds.empty()) throw std::invalid_argument("at least one seed is required");
  if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size()) {
    throw std::invalid_argument("seeds must be distinct");
  }
  if (workers == 0) throw std::invalid_argument("workers must be at least 1");
  // L may be derived per environment, so check the rest with a placeholder.
  LearnerConfig probe = learner;
  if (probe.mode == LearnerMode::count_restart && !probe.l_changes) probe.l_changes = 0;
  probe.validate();
  const auto nonempty = [](const auto& dim, const char* name) {
    if (dim && dim->empty()) {
      throw std::invalid_argument(std::string("sweep dimension '") + name + "' is empty");
    }
  };
  nonempty(grid.budget, "budget");
  nonempty(grid.n_changes, "n_changes");
  nonempty(grid.mode, "mode");
  nonempty(grid.horizon, "horizon");
}

ExperimentSpec experiment_spec_from_json(std::string_view text) {
  const json doc = parse_json_text(text);
  if (!doc.is_object()) throw FormatError("experiment config must be a JSON object");
  reject_unknown_keys(doc,
                      {"environment", "mode", "delta", "v_tilde_r", "v_tilde_p", "l_changes",
                       "evi_epsilon", "known_variation", "horizon", "seeds", "out", "workers",
                       "include_alt", "grid"},
                      "experiment config");
  ExperimentSpec spec;
  try {
    if (doc.contains("environment")) {
      const auto& env = doc.at("environment");
      reject_unknown_keys(env,
                          {"generator", "states", "actions", "n_changes", "change_magnitude",
                           "budget", "path"},
                          "environment");
      auto& out = spec.environment;
      read_if(env, "generator", out.generator);
      read_if(env, "states", out.n_states);
      read_if(env, "actions", out.n_actions);
      read_if(env, "n_changes", out.n_changes);
      read_if(env, "change_magnitude", out.change_magnitude);
      read_if(env, "budget", out.budget);
      read_if(env, "path", out.path);
    }
    auto& learner = spec.learner;
    if (doc.contains("mode")) {
      learner.mode = learner_mode_from_string(doc.at("mode").get<std::string>());
    }
    read_if(doc, "delta", learner.delta);
    read_if(doc, "v_tilde_r", learner.v_tilde_r);
    read_if(doc, "v_tilde_p", learner.v_tilde_p);
    if (doc.contains("l_changes")) learner.l_changes = doc.at("l_changes").get<std::size_t>();
    if (doc.contains("evi_epsilon")) {
      const auto& eps = doc.at("evi_epsilon");
      if (!(eps.is_string() && eps.get<std::string>() == "one-over-sqrt-tk")) {
        learner.evi_epsilon.fixed = eps.get<double>();
      }
    }
    read_if(doc, "known_variation", learner.known_variation);
    read_if(doc, "horizon", spec.horizon);
    read_if(doc, "seeds", spec.seeds);
    read_if(doc, "out", spec.out_dir);
    read_if(doc, "workers", spec.workers);
    read_if(doc, "include_alt", spec.include_alt);
    if (doc.contains("grid")) {
      const auto& grid = doc.at("grid");
      reject_unknown_keys(grid, {"budget", "n_changes", "mode", "horizon"}, "grid");
      spec.grid.budget = read_dimension<double>(grid, "budget");
      spec.grid.n_changes = read_dimension<std::size_t>(grid, "n_changes");
      spec.grid.horizon = read_dimension<std::size_t>(grid, "horizon");
      if (const auto modes = read_dimension<std::string>(grid, "mode")) {
        spec.grid.mode.emplace();
        for (const auto& name : *modes) spec.grid.mode->push_back(learner_mode_from_string(name));
      }
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("experiment config: ") + e.what());
  }
  return spec;
}

ExperimentSpec load_experiment_spec(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open config '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return experiment_spec_from_json(text.str());
}

std::uint64_t environment_seed(std::uint64_t root) { return derive_seed(root, 0); }
std::uint64_t trajectory_seed(std::uint64_t root) { return derive_seed(root, 1); }

NonstationaryMdp build_environment(const EnvironmentSpec& spec, std::size_t horizon,
                                   std::uint64_t root_seed) {
  if (spec.generator == "abrupt") {
    return make_abrupt(environment_seed(root_seed), spec.n_states, spec.n_actions, horizon,
                       spec.n_changes, spec.change_magnitude);
  }
  if (spec.generator == "gradual") {
    return make_gradual(environment_seed(root_seed), spec.n_states, spec.n_actions, horizon,
                        spec.budget);
  }
  if (spec.generator == "file") {
    std::ifstream in(spec.path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open environment '" + spec.path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    auto env = nonstationary_mdp_from_json(text.str());
    if (env.horizon() != horizon) {
      throw std::invalid_argument("environment horizon " + std::to_string(env.horizon()) +
                                  " differs from the requested horizon " +
                                  std::to_string(horizon));
    }
    return env;
  }
  throw std::invalid_argument("unknown environment generator '" + spec.generator + "'");
}

LearnerConfig resolve_config(const LearnerConfig& config, const NonstationaryMdp& env) {
  LearnerConfig out = config;
  if (out.mode == LearnerMode::count_restart) {
    if (!out.l_changes) out.l_changes = count_changed_steps(variation(env, false));
  } else {
    out.l_changes.reset();
  }
  return out;
}

RunOutcome run_replication(const NonstationaryMdp& env, const LearnerConfig& config,
                           std::uint64_t root_seed, bool include_alt, RunRecord* record_out,
                           RegretReport* report_out) {
  const LearnerConfig resolved = resolve_config(config, env);
  RunRecord record = run_learner(env, resolved, trajectory_seed(root_seed));
  RegretReport report = evaluate_regret(record, env, include_alt);
  report.bound_checks = assert_regret_bounds(record, env, report);
  const auto summary = variation(env, false);

  RunOutcome outcome;
  outcome.seed = root_seed;
  outcome.mode = resolved.mode;
  outcome.horizon = env.horizon();
  outcome.v_r = summary.v_r;
  outcome.v_p = summary.v_p;
  outcome.l_changes = resolved.l_changes.value_or(count_changed_steps(summary));
  outcome.regret = report.regret;
  outcome.alt_regret = report.alt_regret;
  outcome.bound = report.bound_checks.front();
  outcome.episodes = record.episode_starts.size();
  outcome.phases = record.phases.size();
  if (record_out) *record_out = std::move(record);
  if (report_out) *report_out = std::move(report);
  return outcome;
}

int cli_run(const ExperimentSpec& spec, std::ostream& log) {
  spec.validate();
  const fs::path out_dir(spec.out_dir);
  fs::create_directories(out_dir);

  std::vector<RunOutcome> outcomes(spec.seeds.size());
  std::mutex log_mutex;
  const auto errors = parallel_for(spec.seeds.size(), spec.workers, [&](std::size_t i) {
    const std::uint64_t seed = spec.seeds[i];
    const fs::path prefix = out_dir / ("seed-" + std::to_string(seed));
    try {
      const auto env = build_environment(spec.environment, spec.horizon, seed);
      write_file(prefix.string() + ".env.json", to_json(env));
      RunRecord record;
      RegretReport report;
      outcomes[i] = run_replication(env, spec.learner, seed, spec.include_alt, &record, &report);
      write_file(prefix.string() + ".record.tsv", run_record_to_text(record));
      std::ostringstream report_text;
      write_regret_report(report_text, report);
      write_file(prefix.string() + ".report.tsv", report_text.str());
      std::ostringstream curve_text;
      write_regret_curve(curve_text, report);
      write_file(prefix.string() + ".curve.tsv", curve_text.str());
    } catch (const std::exception& e) {
      write_file(prefix.string() + ".failed", std::string("FAILED ") + e.what() + "\n");
      throw;
    }
    std::lock_guard lock(log_mutex);
    log << "seed " << seed << ": regret " << outcomes[i].regret << '\n';
  });

  std::ostringstream summary;
  summary << "# format vucrl-summary\n";
  summary << "# mode " << to_string(spec.learner.mode) << '\n';
  summary << "# horizon " << spec.horizon << '\n';
  summary << "seed\tmode\thorizon\tv_r\tv_p\tregret\talt_regret\tbound_name\tbound_value\t"
             "satisfied\tepisodes\tphases\tstatus\n";
  int status = 0;
  for (std::size_t i = 0; i < spec.seeds.size(); ++i) {
    if (!errors[i].empty()) {
      status = 1;
      log << "seed " << spec.seeds[i] << " failed: " << errors[i] << '\n';
      summary << spec.seeds[i] << '\t' << to_string(spec.learner.mode) << '\t' << spec.horizon
              << "\t-\t-\t-\t-\t-\t-\t-\t-\t-\tfailed\n";
      continue;
    }
    const auto& o = outcomes[i];
    summary << o.seed << '\t' << to_string(o.mode) << '\t' << o.horizon << '\t'
            << exact_text(o.v_r) << '\t' << exact_text(o.v_p) << '\t' << exact_text(o.regret)
            << '\t' << optional_text(o.alt_regret) << '\t' << o.bound.name << '\t'
            << exact_text(o.bound.value) << '\t' << (o.bound.satisfied ? "yes" : "no") << '\t'
            << o.episodes << '\t' << o.phases << "\tok\n";
  }
  write_file(out_dir / "summary.tsv", summary.str());
  return status;
}

int cli_sweep(const ExperimentSpec& spec, std::ostream& log) {
  spec.validate();
  const auto horizons = spec.grid.horizon.value_or(std::vector<std::size_t>{spec.horizon});
  const auto budgets = spec.grid.budget.value_or(std::vector<double>{spec.environment.budget});
  const auto changes =
      spec.grid.n_changes.value_or(std::vector<std::size_t>{spec.environment.n_changes});
  const auto modes = spec.grid.mode.value_or(std::vector<LearnerMode>{spec.learner.mode});

  // One job per environment cell; every mode runs on the same environment.
  struct Cell {
    std::size_t horizon;
    double budget;
    std::size_t n_changes;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (auto h : horizons)
    for (auto b : budgets)
      for (auto n : changes)
        for (auto s : spec.seeds) cells.push_back({h, b, n, s});

  std::vector<std::vector<std::optional<RunOutcome>>> results(cells.size());
  std::vector<std::vector<std::string>> run_errors(cells.size());
  std::mutex log_mutex;
  const auto errors = parallel_for(cells.size(), spec.workers, [&](std::size_t i) {
    const Cell& cell = cells[i];
    EnvironmentSpec env_spec = spec.environment;
    env_spec.budget = cell.budget;
    env_spec.n_changes = cell.n_changes;
    const auto env = build_environment(env_spec, cell.horizon, cell.seed);
    results[i].resize(modes.size());
    run_errors[i].resize(modes.size());
    for (std::size_t m = 0; m < modes.size(); ++m) {
      LearnerConfig config = spec.learner;
      if (config.mode != modes[m]) config.l_changes.reset();
      config.mode = modes[m];
      try {
        results[i][m] = run_replication(env, config, cell.seed, spec.include_alt);
      } catch (const std::exception& e) {
        run_errors[i][m] = e.what();
      }
    }
    std::lock_guard lock(log_mutex);
    log << "cell T=" << cell.horizon << " budget=" << cell.budget << " changes=" << cell.n_changes
        << " seed=" << cell.seed << " done\n";
  });

  std::ostringstream table;
  table << "# format vucrl-sweep\n";
  table << "# generator " << spec.environment.generator << '\n';
  table << "horizon\tbudget\tn_changes\tmode\tseed\tv_r\tv_p\tl_changes\tregret\talt_regret\t"
           "bound_name\tbound_value\tsatisfied\tepisodes\tphases\tstatus\n";
  int status = 0;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const Cell& cell = cells[i];
    for (std::size_t m = 0; m < modes.size(); ++m) {
      table << cell.horizon << '\t' << exact_text(cell.budget) << '\t' << cell.n_changes << '\t'
            << to_string(modes[m]) << '\t' << cell.seed << '\t';
      const std::string& error = errors[i].empty() ? run_errors[i][m] : errors[i];
      if (!error.empty() || !results[i][m]) {
        status = 1;
        log << "run failed: " << error << '\n';
        table << "-\t-\t-\t-\t-\t-\t-\t-\t-\t-\tfailed\n";
        continue;
      }
      const auto& o = *results[i][m];
      table << exact_text(o.v_r) << '\t' << exact_text(o.v_p) << '\t' << o.l_changes << '\t'
            << exact_text(o.regret) << '\t' << optional_text(o.alt_regret) << '\t'
            << o.bound.name << '\t' << exact_text(o.bound.value) << '\t'
            << (o.bound.satisfied ? "yes" : "no") << '\t' << o.episodes << '\t' << o.phases
            << "\tok\n";
    }
  }
  const fs::path out_dir(spec.out_dir);
  fs::create_directories(out_dir);
  write_file(out_dir / "sweep.tsv", table.str());
  return status;
}

VerifyLevel verify_level_from_string(std::string_view name) {
  if (name == "fast") return VerifyLevel::fast;
  if (name == "full") return VerifyLevel::full;
  throw std::invalid_argument("unknown verify level '" + std::string(name) + "'");
}

}  // namespace vucrl
