#include "vucrl/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>
#include <string>

#include "vucrl/errors.hpp"

namespace vucrl {

namespace {

constexpr double kHittingTimeTolerance = 1e-9;
constexpr double kHittingTimeCap = 1e7;

struct IterationOutcome {
  double gain = 0.0;
  std::vector<double> relative;
  DeterministicPolicy policy;
  std::size_t sweeps = 0;
};

// Shared loop of relative value iteration and fixed-policy evaluation on the
// aperiodicity-transformed kernel (1 - w) p + w * self-loop.
IterationOutcome average_reward_iteration(const StationaryMdp& mdp,
                                          const DeterministicPolicy* fixed, double epsilon,
                                          std::size_t max_sweeps) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("solver epsilon must be positive");
  const std::size_t n_states = mdp.n_states();
  const std::size_t n_actions = mdp.n_actions();
  constexpr double keep = 1.0 - kAperiodicityWeight;

  std::vector<double> current(n_states, 0.0);
  std::vector<double> next(n_states, 0.0);
  DeterministicPolicy greedy{std::vector<ActionIndex>(n_states, 0)};

  for (std::size_t sweep = 1; sweep <= max_sweeps; ++sweep) {
    for (StateIndex s = 0; s < n_states; ++s) {
      const ActionIndex first = fixed ? fixed->action_of[s] : 0;
      const ActionIndex last = fixed ? first + 1 : n_actions;
      double best = -std::numeric_limits<double>::infinity();
      ActionIndex best_action = first;
      for (ActionIndex a = first; a < last; ++a) {
        const auto row = mdp.row(s, a);
        double expected = 0.0;
        for (StateIndex t = 0; t < n_states; ++t) expected += row[t] * current[t];
        const double q = mdp.reward(s, a) + keep * expected + kAperiodicityWeight * current[s];
        if (q > best) {
          best = q;
          best_action = a;
        }
      }
      next[s] = best;
      greedy.action_of[s] = best_action;
    }

    double hi = -std::numeric_limits<double>::infinity();
    double lo = std::numeric_limits<double>::infinity();
    for (StateIndex s = 0; s < n_states; ++s) {
      const double d = next[s] - current[s];
      hi = std::max(hi, d);
      lo = std::min(lo, d);
    }
    if (hi - lo < epsilon) {
      const double base = *std::min_element(current.begin(), current.end());
      for (double& v : current) v = keep * (v - base);
      return {0.5 * (hi + lo), std::move(current), std::move(greedy), sweep};
    }
    const double shift = *std::min_element(next.begin(), next.end());
    for (StateIndex s = 0; s < n_states; ++s) current[s] = next[s] - shift;
  }
  throw NonConvergenceError("average-reward iteration did not converge within " +
                            std::to_string(max_sweeps) +
                            " sweeps; the input is likely not communicating (or the policy "
                            "is not unichain)");
}

// States that can reach `target` along positive-probability edges.
std::vector<bool> can_reach(const StationaryMdp& mdp, StateIndex target) {
  const std::size_t n_states = mdp.n_states();
  std::vector<bool> reached(n_states, false);
  reached[target] = true;
  std::deque<StateIndex> frontier{target};
  while (!frontier.empty()) {
    const StateIndex to = frontier.front();
    frontier.pop_front();
    for (StateIndex from = 0; from < n_states; ++from) {
      if (reached[from]) continue;
      for (ActionIndex a = 0; a < mdp.n_actions(); ++a) {
        if (mdp.probability(from, a, to) > 0.0) {
          reached[from] = true;
          frontier.push_back(from);
          break;
        }
      }
    }
  }
  return reached;
}

}  // namespace

StationaryMdp::StationaryMdp(std::size_t n_states, std::size_t n_actions,
                             std::vector<double> mean_reward, std::vector<double> transition)
    : n_states_(n_states),
      n_actions_(n_actions),
      reward_(std::move(mean_reward)),
      transition_(std::move(transition)) {
  if (n_states_ == 0 || n_actions_ == 0) {
    throw std::invalid_argument("StationaryMdp: state and action counts must be positive");
  }
  if (reward_.size() != n_states_ * n_actions_) {
    throw std::invalid_argument("StationaryMdp: mean_reward must have S*A entries");
  }
  if (transition_.size() != n_states_ * n_actions_ * n_states_) {
    throw std::invalid_argument("StationaryMdp: transition must have S*A*S entries");
  }
  for (double r : reward_) {
    if (!(r >= 0.0 && r <= 1.0)) {
      throw std::invalid_argument("StationaryMdp: mean rewards must lie in [0,1]");
    }
  }
  for (std::size_t sa = 0; sa < n_states_ * n_actions_; ++sa) {
    double total = 0.0;
    for (std::size_t t = 0; t < n_states_; ++t) {
      const double p = transition_[sa * n_states_ + t];
      if (!(p >= 0.0 && p <= 1.0 + kSimplexTolerance)) {
        throw std::invalid_argument("StationaryMdp: transition probabilities must lie in [0,1]");
      }
      total += p;
    }
    if (std::abs(total - 1.0) > kSimplexTolerance) {
      throw std::invalid_argument("StationaryMdp: transition row " + std::to_string(sa) +
                                  " does not sum to 1");
    }
  }
}

StationaryMdp blend(const StationaryMdp& from, const StationaryMdp& to, double weight) {
  if (from.n_states() != to.n_states() || from.n_actions() != to.n_actions()) {
    throw std::invalid_argument("blend: shape mismatch");
  }
  if (!(weight >= 0.0 && weight <= 1.0)) throw std::invalid_argument("blend: weight outside [0,1]");
  const double stay = 1.0 - weight;
  std::vector<double> reward(from.rewards().size());
  for (std::size_t i = 0; i < reward.size(); ++i) {
    reward[i] = std::clamp(stay * from.rewards()[i] + weight * to.rewards()[i], 0.0, 1.0);
  }
  std::vector<double> transition(from.transitions().size());
  for (std::size_t i = 0; i < transition.size(); ++i) {
    transition[i] = stay * from.transitions()[i] + weight * to.transitions()[i];
  }
  return StationaryMdp(from.n_states(), from.n_actions(), std::move(reward), std::move(transition));
}

void validate_policy(const StationaryMdp& mdp, const DeterministicPolicy& policy) {
  if (policy.action_of.size() != mdp.n_states()) {
    throw std::invalid_argument("policy length does not match the state count");
  }
  for (ActionIndex a : policy.action_of) {
    if (a >= mdp.n_actions()) throw std::invalid_argument("policy action index out of range");
  }
}

ValueIterationResult relative_value_iteration(const StationaryMdp& mdp, double epsilon,
                                              std::size_t max_sweeps) {
  auto out = average_reward_iteration(mdp, nullptr, epsilon, max_sweeps);
  return {out.gain, std::move(out.relative), std::move(out.policy), out.sweeps};
}

GainBias policy_gain_bias(const StationaryMdp& mdp, const DeterministicPolicy& policy,
                          double epsilon, std::size_t max_sweeps) {
  validate_policy(mdp, policy);
  auto out = average_reward_iteration(mdp, &policy, epsilon, max_sweeps);
  GainBias result;
  result.gain = out.gain;
  result.bias = std::move(out.relative);
  result.span = span_of(result.bias);
  return result;
}

double poisson_residual(const StationaryMdp& mdp, const DeterministicPolicy& policy,
                        const GainBias& gain_bias) {
  validate_policy(mdp, policy);
  double worst = 0.0;
  for (StateIndex s = 0; s < mdp.n_states(); ++s) {
    const ActionIndex a = policy.action_of[s];
    const auto row = mdp.row(s, a);
    double expected = 0.0;
    for (StateIndex t = 0; t < mdp.n_states(); ++t) expected += row[t] * gain_bias.bias[t];
    worst = std::max(worst,
                     std::abs(gain_bias.gain + gain_bias.bias[s] - mdp.reward(s, a) - expected));
  }
  return worst;
}

bool is_communicating(const StationaryMdp& mdp) {
  for (StateIndex target = 0; target < mdp.n_states(); ++target) {
    const auto reached = can_reach(mdp, target);
    if (std::find(reached.begin(), reached.end(), false) != reached.end()) return false;
  }
  return true;
}

std::vector<double> hitting_times(const StationaryMdp& mdp, StateIndex target) {
  const std::size_t n_states = mdp.n_states();
  if (target >= n_states) throw std::invalid_argument("hitting_times: target out of range");
  const auto reachable = can_reach(mdp, target);

  std::vector<double> times(n_states, 0.0);
  for (StateIndex s = 0; s < n_states; ++s) {
    if (!reachable[s]) times[s] = kInfiniteDiameter;
  }
  std::vector<double> next = times;

  for (std::size_t sweep = 0; sweep < kDefaultMaxSweeps; ++sweep) {
    double change = 0.0;
    bool diverged = false;
    for (StateIndex s = 0; s < n_states; ++s) {
      if (s == target || !reachable[s]) continue;
      double best = kInfiniteDiameter;
      for (ActionIndex a = 0; a < mdp.n_actions(); ++a) {
        const auto row = mdp.row(s, a);
        double expected = 0.0;
        for (StateIndex t = 0; t < n_states; ++t) {
          if (row[t] > 0.0) expected += row[t] * times[t];
        }
        best = std::min(best, expected);
      }
      next[s] = 1.0 + best;
      change = std::max(change, next[s] - times[s]);
      if (next[s] > kHittingTimeCap) diverged = true;
    }
    times.swap(next);
    if (diverged) {
      for (double& t : times) {
        if (t > kHittingTimeCap) t = kInfiniteDiameter;
      }
      return times;
    }
    if (change < kHittingTimeTolerance) return times;
  }
  for (StateIndex s = 0; s < n_states; ++s) {
    if (s != target) times[s] = kInfiniteDiameter;
  }
  return times;
}

double diameter(const StationaryMdp& mdp) {
  if (!is_communicating(mdp)) return kInfiniteDiameter;
  double worst = 0.0;
  for (StateIndex target = 0; target < mdp.n_states(); ++target) {
    for (double t : hitting_times(mdp, target)) {
      if (t == kInfiniteDiameter) return kInfiniteDiameter;
      worst = std::max(worst, t);
    }
  }
  return worst;
}

StateIndex sample_index(std::span<const double> probabilities, Rng& rng) {
  const double u = rng.uniform();
  double cumulative = 0.0;
  StateIndex last_positive = 0;
  for (StateIndex i = 0; i < probabilities.size(); ++i) {
    if (probabilities[i] <= 0.0) continue;
    cumulative += probabilities[i];
    last_positive = i;
    if (u < cumulative) return i;
  }
  return last_positive;
}

StepOutcome sample_step(const StationaryMdp& mdp, StateIndex s, ActionIndex a, Rng& rng) {
  if (s >= mdp.n_states() || a >= mdp.n_actions()) {
    throw std::invalid_argument("sample_step: state or action out of range");
  }
  StepOutcome out;
  out.reward = rng.uniform() < mdp.reward(s, a) ? 1.0 : 0.0;
  out.next_state = sample_index(mdp.row(s, a), rng);
  return out;
}

double span_of(std::span<const double> values) {
  if (values.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return *hi - *lo;
}

double l1_distance(std::span<const double> lhs, std::span<const double> rhs) {
  if (lhs.size() != rhs.size()) throw std::invalid_argument("l1_distance: size mismatch");
  double total = 0.0;
  for (std::size_t i = 0; i < lhs.size(); ++i) total += std::abs(lhs[i] - rhs[i]);
  return total;
}

StationaryMdp random_dense_mdp(Rng& rng, std::size_t n_states, std::size_t n_actions) {
  std::vector<double> reward(n_states * n_actions);
  for (double& r : reward) r = rng.uniform();
  std::vector<double> transition(n_states * n_actions * n_states);
  for (std::size_t sa = 0; sa < n_states * n_actions; ++sa) {
    double total = 0.0;
    for (std::size_t t = 0; t < n_states; ++t) {
      // Keep every entry strictly positive so the support stays full.
      const double draw = rng.exponential() + 1e-6;
      transition[sa * n_states + t] = draw;
      total += draw;
    }
    for (std::size_t t = 0; t < n_states; ++t) transition[sa * n_states + t] /= total;
  }
  return StationaryMdp(n_states, n_actions, std::move(reward), std::move(transition));
}

}  // namespace vucrl
