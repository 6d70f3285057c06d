#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vucrl/confidence.hpp"
#include "vucrl/mdp.hpp"
#include "vucrl/nonstationary.hpp"

namespace vucrl {

enum class LearnerMode {
  /// One UCRL run over the whole horizon with the configured variation widening.
  no_restart,
  /// Restarts after phases of ceil(i^2 / V^2) steps, phase confidence delta / (2 tau^2).
  variation_restart,
  /// Restarts at steps ceil(i^3 / (L+1)^2) with confidence delta / L^2 and no widening.
  count_restart,
  /// The variation-restart schedule with zero widening inside each phase.
  zero_variation_restart,
};

std::string_view to_string(LearnerMode mode);
LearnerMode learner_mode_from_string(std::string_view name);

/// EVI precision per episode: 1/sqrt(t_k) or a fixed value.
struct EviEpsilonRule {
  std::optional<double> fixed;

  double at(std::size_t t_k) const { return fixed ? *fixed : default_evi_epsilon(t_k); }
};

struct LearnerConfig {
  double delta = 0.05;
  /// Widening parameters, also the schedule's variation when
  /// `known_variation` is false (upper-bound mode).
  double v_tilde_r = 0.0;
  double v_tilde_p = 0.0;
  LearnerMode mode = LearnerMode::no_restart;
  /// Number of changes L; required by count_restart and only by it.
  std::optional<std::size_t> l_changes;
  EviEpsilonRule evi_epsilon;
  /// Take the schedule's V and per-phase widening from the environment's
  /// true variation instead of v_tilde_r / v_tilde_p.
  bool known_variation = false;

  /// Throws std::invalid_argument on inconsistent fields.
  void validate() const;
};

struct StepRecord {
  std::size_t t = 0;
  StateIndex state = 0;
  ActionIndex action = 0;
  double reward = 0.0;
  /// 1-based, restarts at every phase.
  std::size_t episode = 0;
  /// 1-based.
  std::size_t phase = 0;
};

struct PhaseRecord {
  std::size_t start = 1;
  std::size_t length = 0;
  double delta = 0.0;
  double v_tilde_r = 0.0;
  double v_tilde_p = 0.0;
  std::size_t episodes = 0;
  /// sum over episodes and pairs of v_k(s,a) / sqrt(max(1, N_k(s,a))).
  double visit_ratio_sum = 0.0;
};

/// Full trajectory of one learner run. Episode-indexed vectors
/// (episode_starts, optimistic_gains, policies) run over all phases.
struct RunRecord {
  std::size_t n_states = 0;
  std::size_t n_actions = 0;
  std::uint64_t seed = 0;
  LearnerConfig config;
  std::vector<StepRecord> steps;
  std::vector<std::size_t> episode_starts;
  std::vector<std::size_t> phase_starts;
  std::vector<double> optimistic_gains;
  std::vector<DeterministicPolicy> policies;
  std::vector<PhaseRecord> phases;
};

/// Everything visible at an episode start, handed to RunObserver.
struct EpisodeContext {
  std::size_t phase = 0;
  const PhaseRecord& phase_record;
  std::size_t episode_in_phase = 0;
  std::size_t t = 0;
  std::size_t t_local = 0;
  StateIndex state = 0;
  const VisitStatistics& stats;
  const PlausibleSet& set;
  const EviResult& evi;
};

/// Optional hooks for diagnostics; neither may influence the run.
struct RunObserver {
  std::function<void(const EpisodeContext&)> on_episode;
  /// Called before the action of step t with the episode's plausible set.
  std::function<void(std::size_t t, const PlausibleSet&)> on_step;
};

/// Doubling criterion: true iff v_k(s,a) >= max(1, N_k(s,a)).
bool episode_should_end(const VisitStatistics& stats, StateIndex s, ActionIndex a);

/// Parameters of one UCRL phase over global steps [t_start, t_start + t_len).
struct PhaseParams {
  std::size_t t_start = 1;
  std::size_t t_len = 0;
  double delta = 0.05;
  double v_tilde_r = 0.0;
  double v_tilde_p = 0.0;
  EviEpsilonRule evi_epsilon;
};

/// Runs variation-aware UCRL for one phase, starting in `state` with
/// statistics `stats` and appending to `record`. Plausible sets use the
/// phase-local episode start time. On return `state` holds the agent's
/// position after the phase.
void run_vaucrl_phase(const NonstationaryMdp& env, const PhaseParams& params,
                      VisitStatistics& stats, StateIndex& state, Rng& rng, RunRecord& record,
                      const RunObserver* observer = nullptr);

/// Whole-horizon run without restarts (mode no_restart).
RunRecord run_vaucrl(const NonstationaryMdp& env, const LearnerConfig& config, std::uint64_t seed,
                     const RunObserver* observer = nullptr);

/// ceil(i^2 / V^2) for i = 1, 2, ..., truncated to sum to exactly `horizon`.
/// A single phase when V = v_r + v_p is 0.
std::vector<std::size_t> variation_phase_lengths(double v_r, double v_p, std::size_t horizon);

/// Sorted distinct steps ceil(i^3 / (L+1)^2) within [1, horizon].
std::vector<std::size_t> count_restart_steps(std::size_t l_changes, std::size_t horizon);

/// Restarted run (variation_restart, count_restart or zero_variation_restart).
RunRecord run_restarted(const NonstationaryMdp& env, const LearnerConfig& config,
                        std::uint64_t seed, const RunObserver* observer = nullptr);

/// Dispatches on config.mode.
RunRecord run_learner(const NonstationaryMdp& env, const LearnerConfig& config,
                      std::uint64_t seed, const RunObserver* observer = nullptr);

/// Number of steps t with a nonzero reward or transition change to t+1.
std::size_t count_changed_steps(const VariationSummary& summary);

}  // namespace vucrl
