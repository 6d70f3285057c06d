#include "vucrl/learner.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "snapshot_cursor.hpp"

namespace vucrl {

namespace {

double visit_ratio(const VisitStatistics& stats) {
  double total = 0.0;
  for (StateIndex s = 0; s < stats.n_states(); ++s) {
    for (ActionIndex a = 0; a < stats.n_actions(); ++a) {
      const auto visits = stats.n_episode(s, a);
      if (visits == 0) continue;
      total += static_cast<double>(visits) /
               std::sqrt(static_cast<double>(std::max<std::uint64_t>(1, stats.n_before(s, a))));
    }
  }
  return total;
}

RunRecord empty_record(const NonstationaryMdp& env, const LearnerConfig& config,
                       std::uint64_t seed) {
  RunRecord record;
  record.n_states = env.n_states();
  record.n_actions = env.n_actions();
  record.seed = seed;
  record.config = config;
  record.steps.reserve(env.horizon());
  return record;
}

}  // namespace

std::string_view to_string(LearnerMode mode) {
  switch (mode) {
    case LearnerMode::no_restart:
      return "no-restart";
    case LearnerMode::variation_restart:
      return "variation-restart";
    case LearnerMode::count_restart:
      return "count-restart";
    case LearnerMode::zero_variation_restart:
      return "zero-variation-restart";
  }
  return "unknown";
}

LearnerMode learner_mode_from_string(std::string_view name) {
  for (auto mode : {LearnerMode::no_restart, LearnerMode::variation_restart,
                    LearnerMode::count_restart, LearnerMode::zero_variation_restart}) {
    if (to_string(mode) == name) return mode;
  }
  throw std::invalid_argument("unknown learner mode '" + std::string(name) + "'");
}

void LearnerConfig::validate() const {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0,1)");
  if (!(v_tilde_r >= 0.0 && v_tilde_p >= 0.0) || !std::isfinite(v_tilde_r) ||
      !std::isfinite(v_tilde_p)) {
    throw std::invalid_argument("variation parameters must be finite and >= 0");
  }
  if (mode == LearnerMode::count_restart && !l_changes) {
    throw std::invalid_argument("count-restart requires the number of changes L");
  }
  if (mode != LearnerMode::count_restart && l_changes) {
    throw std::invalid_argument("the number of changes L is only used by count-restart");
  }
  if (evi_epsilon.fixed && !(*evi_epsilon.fixed > 0.0)) {
    throw std::invalid_argument("a fixed EVI epsilon must be positive");
  }
}

bool episode_should_end(const VisitStatistics& stats, StateIndex s, ActionIndex a) {
  return stats.n_episode(s, a) >= std::max<std::uint64_t>(1, stats.n_before(s, a));
}

void run_vaucrl_phase(const NonstationaryMdp& env, const PhaseParams& params,
                      VisitStatistics& stats, StateIndex& state, Rng& rng, RunRecord& record,
                      const RunObserver* observer) {
  if (params.t_start < 1 || params.t_len == 0 ||
      params.t_start + params.t_len - 1 > env.horizon()) {
    throw std::invalid_argument("phase [" + std::to_string(params.t_start) + ", +" +
                                std::to_string(params.t_len) + ") exceeds the horizon");
  }
  const std::size_t last = params.t_start + params.t_len - 1;
  record.phases.push_back({params.t_start, params.t_len, params.delta, params.v_tilde_r,
                           params.v_tilde_p, 0, 0.0});
  record.phase_starts.push_back(params.t_start);
  const std::size_t phase = record.phases.size();
  SnapshotCursor cursor(env);

  std::size_t t = params.t_start;
  std::size_t episode = 0;
  while (t <= last) {
    stats.close_episode();
    ++episode;
    const std::size_t t_local = t - params.t_start + 1;
    const auto set = make_plausible_set(stats, t_local, params.delta, params.v_tilde_r,
                                        params.v_tilde_p);
    const auto evi = extended_value_iteration(set, params.evi_epsilon.at(t_local));
    record.episode_starts.push_back(t);
    record.optimistic_gains.push_back(evi.gain);
    record.policies.push_back(evi.policy);
    if (observer && observer->on_episode) {
      observer->on_episode(
          {phase, record.phases.back(), episode, t, t_local, state, stats, set, evi});
    }

    while (t <= last) {
      const ActionIndex action = evi.policy.action_of[state];
      if (episode_should_end(stats, state, action)) break;
      if (observer && observer->on_step) observer->on_step(t, set);
      const auto outcome = sample_step(cursor.at(t), state, action, rng);
      record.steps.push_back({t, state, action, outcome.reward, episode, phase});
      stats.record(state, action, outcome.reward, outcome.next_state);
      state = outcome.next_state;
      ++t;
    }
    record.phases.back().visit_ratio_sum += visit_ratio(stats);
  }
  stats.close_episode();
  record.phases.back().episodes = episode;
}

RunRecord run_vaucrl(const NonstationaryMdp& env, const LearnerConfig& config, std::uint64_t seed,
                     const RunObserver* observer) {
  config.validate();
  if (config.mode != LearnerMode::no_restart) {
    throw std::invalid_argument("run_vaucrl handles the no-restart mode only");
  }
  PhaseParams params{1, env.horizon(), config.delta, config.v_tilde_r, config.v_tilde_p,
                     config.evi_epsilon};
  if (config.known_variation) {
    const auto summary = variation(env, false);
    params.v_tilde_r = summary.v_r;
    params.v_tilde_p = summary.v_p;
  }
  RunRecord record = empty_record(env, config, seed);
  VisitStatistics stats(env.n_states(), env.n_actions());
  StateIndex state = env.initial_state();
  Rng rng(seed);
  run_vaucrl_phase(env, params, stats, state, rng, record, observer);
  return record;
}

std::vector<std::size_t> variation_phase_lengths(double v_r, double v_p, std::size_t horizon) {
  if (!(v_r >= 0.0 && v_p >= 0.0)) throw std::invalid_argument("variation must be >= 0");
  if (horizon == 0) throw std::invalid_argument("horizon must be positive");
  const double total = v_r + v_p;
  if (total == 0.0) return {horizon};
  std::vector<std::size_t> lengths;
  std::size_t remaining = horizon;
  for (std::size_t i = 1; remaining > 0; ++i) {
    const double ideal = std::ceil(static_cast<double>(i) * static_cast<double>(i) /
                                   (total * total));
    const std::size_t length =
        ideal >= static_cast<double>(remaining) ? remaining : static_cast<std::size_t>(ideal);
    lengths.push_back(std::max<std::size_t>(1, length));
    remaining -= lengths.back();
  }
  return lengths;
}

std::vector<std::size_t> count_restart_steps(std::size_t l_changes, std::size_t horizon) {
  if (horizon == 0) throw std::invalid_argument("horizon must be positive");
  __extension__ typedef unsigned __int128 wide;
  const wide denominator = static_cast<wide>(l_changes + 1) * static_cast<wide>(l_changes + 1);
  std::vector<std::size_t> steps;
  for (wide i = 1;; ++i) {
    const wide step = (i * i * i + denominator - 1) / denominator;
    if (step > horizon) break;
    const auto value = static_cast<std::size_t>(step);
    if (steps.empty() || steps.back() != value) steps.push_back(value);
  }
  return steps;
}

RunRecord run_restarted(const NonstationaryMdp& env, const LearnerConfig& config,
                        std::uint64_t seed, const RunObserver* observer) {
  config.validate();
  if (config.mode == LearnerMode::no_restart) {
    throw std::invalid_argument("run_restarted needs a restarting mode");
  }
  const std::size_t horizon = env.horizon();
  const auto summary = variation(env, false);
  const double schedule_r = config.known_variation ? summary.v_r : config.v_tilde_r;
  const double schedule_p = config.known_variation ? summary.v_p : config.v_tilde_p;

  std::vector<PhaseParams> plan;
  if (config.mode == LearnerMode::count_restart) {
    const std::size_t changes = *config.l_changes;
    const double square = static_cast<double>(changes) * static_cast<double>(changes);
    const double phase_delta = config.delta / std::max(1.0, square);
    const auto starts = count_restart_steps(changes, horizon);
    for (std::size_t i = 0; i < starts.size(); ++i) {
      const std::size_t end = i + 1 < starts.size() ? starts[i + 1] : horizon + 1;
      plan.push_back({starts[i], end - starts[i], phase_delta, 0.0, 0.0, config.evi_epsilon});
    }
  } else {
    std::size_t start = 1;
    for (const std::size_t length : variation_phase_lengths(schedule_r, schedule_p, horizon)) {
      PhaseParams params{start, length,
                         config.delta / (2.0 * static_cast<double>(start) *
                                         static_cast<double>(start)),
                         0.0, 0.0, config.evi_epsilon};
      if (config.mode == LearnerMode::variation_restart) {
        if (config.known_variation) {
          params.v_tilde_r = reward_variation_between(summary, start, start + length - 1);
          params.v_tilde_p = transition_variation_between(summary, start, start + length - 1);
        } else {
          params.v_tilde_r = config.v_tilde_r;
          params.v_tilde_p = config.v_tilde_p;
        }
      }
      plan.push_back(params);
      start += length;
    }
  }

  RunRecord record = empty_record(env, config, seed);
  StateIndex state = env.initial_state();
  Rng rng(seed);
  for (const auto& params : plan) {
    VisitStatistics stats(env.n_states(), env.n_actions());
    run_vaucrl_phase(env, params, stats, state, rng, record, observer);
  }
  return record;
}

RunRecord run_learner(const NonstationaryMdp& env, const LearnerConfig& config,
                      std::uint64_t seed, const RunObserver* observer) {
  return config.mode == LearnerMode::no_restart ? run_vaucrl(env, config, seed, observer)
                                                : run_restarted(env, config, seed, observer);
}

std::size_t count_changed_steps(const VariationSummary& summary) {
  std::size_t changed = 0;
  for (std::size_t i = 0; i < summary.per_step_r.size(); ++i) {
    if (summary.per_step_r[i] > 0.0 || summary.per_step_p[i] > 0.0) ++changed;
  }
  return changed;
}

}  // namespace vucrl
