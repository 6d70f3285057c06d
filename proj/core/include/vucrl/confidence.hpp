#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "vucrl/mdp.hpp"

namespace vucrl {

/// Visit counts and sufficient statistics of one learner phase.
///
/// n_before(s,a) counts visits in earlier episodes (N_k), n_episode(s,a) the
/// visits of the running episode (v_k). Reward sums and transition counts
/// cover both.
class VisitStatistics {
 public:
  VisitStatistics(std::size_t n_states, std::size_t n_actions);

  std::size_t n_states() const noexcept { return n_states_; }
  std::size_t n_actions() const noexcept { return n_actions_; }

  std::uint64_t n_before(StateIndex s, ActionIndex a) const { return n_before_[s * n_actions_ + a]; }
  std::uint64_t n_episode(StateIndex s, ActionIndex a) const {
    return n_episode_[s * n_actions_ + a];
  }
  std::uint64_t n_total(StateIndex s, ActionIndex a) const {
    return n_before(s, a) + n_episode(s, a);
  }
  double reward_sum(StateIndex s, ActionIndex a) const { return reward_sum_[s * n_actions_ + a]; }
  std::uint64_t transition_count(StateIndex s, ActionIndex a, StateIndex next) const {
    return transition_count_[(s * n_actions_ + a) * n_states_ + next];
  }

  /// Adds one completed transition to the running episode.
  void record(StateIndex s, ActionIndex a, double reward, StateIndex next);

  /// Folds the running episode counts into n_before and clears n_episode.
  void close_episode();

 private:
  std::size_t n_states_;
  std::size_t n_actions_;
  std::vector<std::uint64_t> n_before_;
  std::vector<std::uint64_t> n_episode_;
  std::vector<double> reward_sum_;
  std::vector<std::uint64_t> transition_count_;
};

struct Estimates {
  std::vector<double> r_hat;  // S x A
  std::vector<double> p_hat;  // S x A x S
};

/// Sample means of rewards and transitions over all recorded visits. Pairs
/// without visits get r_hat = 0 and a uniform p_hat row.
Estimates build_estimates(const VisitStatistics& stats);

/// Empirical model plus variation-widened confidence radii.
struct PlausibleSet {
  std::size_t n_states = 0;
  std::size_t n_actions = 0;
  std::vector<double> r_hat;
  std::vector<double> p_hat;
  std::vector<double> width_r;
  std::vector<double> width_p;
  std::size_t t_k = 1;
  double delta = 0.0;
  double v_tilde_r = 0.0;
  double v_tilde_p = 0.0;

  std::span<const double> p_hat_row(StateIndex s, ActionIndex a) const {
    return {p_hat.data() + (s * n_actions + a) * n_states, n_states};
  }
};

/// Reward radius  v_r + sqrt(8 ln(8 S A t^3 / delta) / max(1, n))  and
/// transition radius  min(2, v_p + sqrt(8 S ln(8 S A t^3 / delta) / max(1, n))).
double reward_confidence_width(std::size_t n_states, std::size_t n_actions, std::size_t t_k,
                               double delta, double v_tilde_r, std::uint64_t visits);
double transition_confidence_width(std::size_t n_states, std::size_t n_actions, std::size_t t_k,
                                   double delta, double v_tilde_p, std::uint64_t visits);

/// Plausible set at episode start t_k, using N = n_before for the radii.
PlausibleSet make_plausible_set(const VisitStatistics& stats, std::size_t t_k, double delta,
                                double v_tilde_r, double v_tilde_p);

/// Degenerate set containing exactly `mdp` (all radii zero).
PlausibleSet point_set(const StationaryMdp& mdp);

/// Maximizes sum_s' q(s') u(s') over the simplex intersected with the L1 ball
/// of radius `width` around `p_hat_row`, where `value_order` ranks states by
/// u descending. Mass moves to the top state and is taken from the bottom
/// states first.
std::vector<double> inner_max_transition(std::span<const double> p_hat_row, double width,
                                         std::span<const StateIndex> value_order);

/// States sorted by value descending, lower index first on ties.
std::vector<StateIndex> order_by_value_descending(std::span<const double> values);

struct EviResult {
  double gain = 0.0;
  /// Relative optimistic values, min entry 0.
  std::vector<double> value;
  DeterministicPolicy policy;
  std::vector<double> optimistic_reward;      // S x A
  std::vector<double> optimistic_transition;  // S x A x S
  std::size_t iterations = 0;

  /// The optimistic MDP as a StationaryMdp.
  StationaryMdp optimistic_mdp() const;
};

inline double default_evi_epsilon(std::size_t t_k) {
  return 1.0 / std::sqrt(static_cast<double>(t_k));
}

/// Extended value iteration over the plausible set: jointly maximizes over
/// actions and over models within the radii (optimistic rewards capped at 1).
/// Stops when the span of successive differences drops below `epsilon`; the
/// gain is within epsilon of the best optimal gain in the set. Throws
/// NonConvergenceError after `max_iterations`.
EviResult extended_value_iteration(const PlausibleSet& set, double epsilon,
                                   std::size_t max_iterations = kDefaultMaxSweeps);

/// True iff every reward and transition row of `mdp` lies within the set's
/// radii around the estimates.
bool contains_mdp(const PlausibleSet& set, const StationaryMdp& mdp);

}  // namespace vucrl
