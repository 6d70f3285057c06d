#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vucrl/random.hpp"

namespace vucrl {

using StateIndex = std::size_t;
using ActionIndex = std::size_t;

inline constexpr double kDefaultSolverEpsilon = 1e-9;
inline constexpr std::size_t kDefaultMaxSweeps = 1'000'000;
/// Self-loop weight mixed into every transition row inside the average-reward
/// iterations. The transform keeps gains and optimal policies unchanged and
/// makes span-based stopping converge on periodic chains.
inline constexpr double kAperiodicityWeight = 0.01;
inline constexpr double kInfiniteDiameter = std::numeric_limits<double>::infinity();
/// Row sums must match 1 within this tolerance.
inline constexpr double kSimplexTolerance = 1e-12;

/// A time-homogeneous tabular MDP: mean rewards r(s,a) in [0,1] and
/// transition kernel p(s'|s,a). Immutable after construction.
class StationaryMdp {
 public:
  /// `mean_reward` is row-major S x A, `transition` row-major S x A x S.
  /// Throws std::invalid_argument when a shape, reward range or simplex
  /// invariant is violated.
  StationaryMdp(std::size_t n_states, std::size_t n_actions, std::vector<double> mean_reward,
                std::vector<double> transition);

  std::size_t n_states() const noexcept { return n_states_; }
  std::size_t n_actions() const noexcept { return n_actions_; }

  double reward(StateIndex s, ActionIndex a) const { return reward_[s * n_actions_ + a]; }

  std::span<const double> row(StateIndex s, ActionIndex a) const {
    return {transition_.data() + (s * n_actions_ + a) * n_states_, n_states_};
  }

  double probability(StateIndex s, ActionIndex a, StateIndex next) const {
    return transition_[(s * n_actions_ + a) * n_states_ + next];
  }

  const std::vector<double>& rewards() const noexcept { return reward_; }
  const std::vector<double>& transitions() const noexcept { return transition_; }

  bool operator==(const StationaryMdp&) const = default;

 private:
  std::size_t n_states_;
  std::size_t n_actions_;
  std::vector<double> reward_;
  std::vector<double> transition_;
};

/// Convex combination (1 - weight) * from + weight * to, computed entrywise.
StationaryMdp blend(const StationaryMdp& from, const StationaryMdp& to, double weight);

/// A stationary deterministic policy: one action per state.
struct DeterministicPolicy {
  std::vector<ActionIndex> action_of;

  bool operator==(const DeterministicPolicy&) const = default;
};

/// Throws std::invalid_argument unless `policy` assigns a valid action to
/// every state of `mdp`.
void validate_policy(const StationaryMdp& mdp, const DeterministicPolicy& policy);

/// Gain, bias (normalized to min 0) and bias span of a policy.
struct GainBias {
  double gain = 0.0;
  std::vector<double> bias;
  double span = 0.0;
};

struct ValueIterationResult {
  double gain = 0.0;
  /// Relative values, shifted so the minimum entry is 0.
  std::vector<double> value;
  DeterministicPolicy policy;
  std::size_t sweeps = 0;
};

/// Average-reward relative value iteration.
///
/// Stops once the span of successive value differences drops below
/// `epsilon`; the gain is the midpoint of the final difference vector, so it
/// is within epsilon/2 of the optimal gain on communicating inputs. Throws
/// NonConvergenceError after `max_sweeps`.
ValueIterationResult relative_value_iteration(const StationaryMdp& mdp,
                                              double epsilon = kDefaultSolverEpsilon,
                                              std::size_t max_sweeps = kDefaultMaxSweeps);

/// Gain and bias of a fixed policy (unichain required; a multichain policy
/// surfaces as NonConvergenceError).
GainBias policy_gain_bias(const StationaryMdp& mdp, const DeterministicPolicy& policy,
                          double epsilon = kDefaultSolverEpsilon,
                          std::size_t max_sweeps = kDefaultMaxSweeps);

/// max_s |gain + bias(s) - r(s,pi(s)) - sum_s' p(s'|s,pi(s)) bias(s')|.
double poisson_residual(const StationaryMdp& mdp, const DeterministicPolicy& policy,
                        const GainBias& gain_bias);

/// True when every state can reach every other state along positive-probability
/// transitions under some choice of actions.
bool is_communicating(const StationaryMdp& mdp);

/// Minimal expected hitting times of `target` from every state (target itself
/// is 0). Entries are kInfiniteDiameter when the target is unreachable or an
/// iterate exceeds the divergence cap.
std::vector<double> hitting_times(const StationaryMdp& mdp, StateIndex target);

/// Maximum over ordered state pairs of the minimal expected hitting time.
/// Returns 0 for a single-state MDP and kInfiniteDiameter when some state
/// cannot be reached from another.
double diameter(const StationaryMdp& mdp);

struct StepOutcome {
  double reward = 0.0;
  StateIndex next_state = 0;
};

/// Draws a Bernoulli(r(s,a)) reward, then a successor from p(.|s,a).
StepOutcome sample_step(const StationaryMdp& mdp, StateIndex s, ActionIndex a, Rng& rng);

/// Draws an index from a probability vector by inversion.
StateIndex sample_index(std::span<const double> probabilities, Rng& rng);

/// max(values) - min(values); 0 for an empty range.
double span_of(std::span<const double> values);

/// L1 distance between two equal-length vectors.
double l1_distance(std::span<const double> lhs, std::span<const double> rhs);

/// Random MDP with U[0,1] rewards and Dirichlet(1) transition rows. Every row
/// has full support, so the result is communicating.
StationaryMdp random_dense_mdp(Rng& rng, std::size_t n_states, std::size_t n_actions);

/// JSON document with fields n_states, n_actions, mean_reward, transition.
/// Doubles are written with round-trip precision.
std::string to_json(const StationaryMdp& mdp);
StationaryMdp stationary_mdp_from_json(std::string_view text);

}  // namespace vucrl
