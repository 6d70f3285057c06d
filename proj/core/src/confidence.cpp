#include "vucrl/confidence.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "vucrl/errors.hpp"

namespace vucrl {

namespace {

constexpr double kContainmentSlack = 1e-12;

double log_term(std::size_t n_states, std::size_t n_actions, std::size_t t_k, double delta) {
  const double t = static_cast<double>(t_k);
  return std::log(8.0 * static_cast<double>(n_states) * static_cast<double>(n_actions) * t * t *
                  t / delta);
}

double visit_floor(std::uint64_t visits) {
  return static_cast<double>(std::max<std::uint64_t>(1, visits));
}

}  // namespace

VisitStatistics::VisitStatistics(std::size_t n_states, std::size_t n_actions)
    : n_states_(n_states),
      n_actions_(n_actions),
      n_before_(n_states * n_actions, 0),
      n_episode_(n_states * n_actions, 0),
      reward_sum_(n_states * n_actions, 0.0),
      transition_count_(n_states * n_actions * n_states, 0) {
  if (n_states == 0 || n_actions == 0) {
    throw std::invalid_argument("VisitStatistics: state and action counts must be positive");
  }
}

void VisitStatistics::record(StateIndex s, ActionIndex a, double reward, StateIndex next) {
  if (s >= n_states_ || a >= n_actions_ || next >= n_states_) {
    throw std::invalid_argument("VisitStatistics::record: index out of range");
  }
  if (!(reward >= 0.0 && reward <= 1.0)) {
    throw std::invalid_argument("VisitStatistics::record: reward outside [0,1]");
  }
  const std::size_t sa = s * n_actions_ + a;
  ++n_episode_[sa];
  reward_sum_[sa] += reward;
  ++transition_count_[sa * n_states_ + next];
}

void VisitStatistics::close_episode() {
  for (std::size_t sa = 0; sa < n_before_.size(); ++sa) {
    n_before_[sa] += n_episode_[sa];
    n_episode_[sa] = 0;
  }
}

Estimates build_estimates(const VisitStatistics& stats) {
  const std::size_t n_states = stats.n_states();
  const std::size_t n_actions = stats.n_actions();
  Estimates out;
  out.r_hat.assign(n_states * n_actions, 0.0);
  out.p_hat.assign(n_states * n_actions * n_states, 0.0);
  const double uniform = 1.0 / static_cast<double>(n_states);
  for (StateIndex s = 0; s < n_states; ++s) {
    for (ActionIndex a = 0; a < n_actions; ++a) {
      const std::size_t sa = s * n_actions + a;
      const std::uint64_t visits = stats.n_total(s, a);
      double* row = out.p_hat.data() + sa * n_states;
      if (visits == 0) {
        std::fill(row, row + n_states, uniform);
        continue;
      }
      const double n = static_cast<double>(visits);
      out.r_hat[sa] = stats.reward_sum(s, a) / n;
      for (StateIndex t = 0; t < n_states; ++t) {
        row[t] = static_cast<double>(stats.transition_count(s, a, t)) / n;
      }
    }
  }
  return out;
}

double reward_confidence_width(std::size_t n_states, std::size_t n_actions, std::size_t t_k,
                               double delta, double v_tilde_r, std::uint64_t visits) {
  return v_tilde_r +
         std::sqrt(8.0 * log_term(n_states, n_actions, t_k, delta) / visit_floor(visits));
}

double transition_confidence_width(std::size_t n_states, std::size_t n_actions, std::size_t t_k,
                                   double delta, double v_tilde_p, std::uint64_t visits) {
  return std::min(2.0, v_tilde_p + std::sqrt(8.0 * static_cast<double>(n_states) *
                                             log_term(n_states, n_actions, t_k, delta) /
                                             visit_floor(visits)));
}

PlausibleSet make_plausible_set(const VisitStatistics& stats, std::size_t t_k, double delta,
                                double v_tilde_r, double v_tilde_p) {
  if (t_k < 1) throw std::invalid_argument("make_plausible_set: t_k must be >= 1");
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("make_plausible_set: delta must lie in (0,1)");
  }
  if (!(v_tilde_r >= 0.0 && v_tilde_p >= 0.0)) {
    throw std::invalid_argument("make_plausible_set: variation parameters must be >= 0");
  }
  const std::size_t n_states = stats.n_states();
  const std::size_t n_actions = stats.n_actions();
  auto estimates = build_estimates(stats);

  PlausibleSet set;
  set.n_states = n_states;
  set.n_actions = n_actions;
  set.r_hat = std::move(estimates.r_hat);
  set.p_hat = std::move(estimates.p_hat);
  set.width_r.resize(n_states * n_actions);
  set.width_p.resize(n_states * n_actions);
  for (StateIndex s = 0; s < n_states; ++s) {
    for (ActionIndex a = 0; a < n_actions; ++a) {
      const auto visits = stats.n_before(s, a);
      set.width_r[s * n_actions + a] =
          reward_confidence_width(n_states, n_actions, t_k, delta, v_tilde_r, visits);
      set.width_p[s * n_actions + a] =
          transition_confidence_width(n_states, n_actions, t_k, delta, v_tilde_p, visits);
    }
  }
  set.t_k = t_k;
  set.delta = delta;
  set.v_tilde_r = v_tilde_r;
  set.v_tilde_p = v_tilde_p;
  return set;
}

PlausibleSet point_set(const StationaryMdp& mdp) {
  PlausibleSet set;
  set.n_states = mdp.n_states();
  set.n_actions = mdp.n_actions();
  set.r_hat = mdp.rewards();
  set.p_hat = mdp.transitions();
  set.width_r.assign(set.r_hat.size(), 0.0);
  set.width_p.assign(set.r_hat.size(), 0.0);
  return set;
}

std::vector<StateIndex> order_by_value_descending(std::span<const double> values) {
  std::vector<StateIndex> order(values.size());
  std::iota(order.begin(), order.end(), StateIndex{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](StateIndex lhs, StateIndex rhs) { return values[lhs] > values[rhs]; });
  return order;
}

std::vector<double> inner_max_transition(std::span<const double> p_hat_row, double width,
                                         std::span<const StateIndex> value_order) {
  if (value_order.size() != p_hat_row.size() || p_hat_row.empty()) {
    throw std::invalid_argument("inner_max_transition: value order must rank every state");
  }
  std::vector<double> q(p_hat_row.begin(), p_hat_row.end());
  const StateIndex top = value_order.front();
  const double added = std::min(std::max(width, 0.0) / 2.0, 1.0 - q[top]);
  if (added <= 0.0) return q;
  q[top] += added;
  double excess = added;
  for (std::size_t i = value_order.size() - 1; i > 0 && excess > 0.0; --i) {
    const StateIndex s = value_order[i];
    const double taken = std::min(q[s], excess);
    q[s] -= taken;
    excess -= taken;
  }
  return q;
}

StationaryMdp EviResult::optimistic_mdp() const {
  const std::size_t n_states = value.size();
  const std::size_t n_actions = optimistic_reward.size() / n_states;
  return StationaryMdp(n_states, n_actions, optimistic_reward, optimistic_transition);
}

EviResult extended_value_iteration(const PlausibleSet& set, double epsilon,
                                   std::size_t max_iterations) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("EVI epsilon must be positive");
  const std::size_t n_states = set.n_states;
  const std::size_t n_actions = set.n_actions;
  constexpr double keep = 1.0 - kAperiodicityWeight;

  EviResult out;
  out.optimistic_reward.resize(n_states * n_actions);
  for (std::size_t sa = 0; sa < out.optimistic_reward.size(); ++sa) {
    out.optimistic_reward[sa] = std::min(1.0, set.r_hat[sa] + set.width_r[sa]);
  }
  out.optimistic_transition.resize(n_states * n_actions * n_states);
  out.policy.action_of.assign(n_states, 0);

  std::vector<double> current(n_states, 0.0);
  std::vector<double> next(n_states, 0.0);

  for (std::size_t iteration = 1; iteration <= max_iterations; ++iteration) {
    const auto order = order_by_value_descending(current);
    for (StateIndex s = 0; s < n_states; ++s) {
      double best = -std::numeric_limits<double>::infinity();
      ActionIndex best_action = 0;
      for (ActionIndex a = 0; a < n_actions; ++a) {
        const std::size_t sa = s * n_actions + a;
        const auto q = inner_max_transition(set.p_hat_row(s, a), set.width_p[sa], order);
        double expected = 0.0;
        for (StateIndex t = 0; t < n_states; ++t) expected += q[t] * current[t];
        std::copy(q.begin(), q.end(), out.optimistic_transition.begin() + sa * n_states);
        const double value =
            out.optimistic_reward[sa] + keep * expected + kAperiodicityWeight * current[s];
        if (value > best) {
          best = value;
          best_action = a;
        }
      }
      next[s] = best;
      out.policy.action_of[s] = best_action;
    }

    double hi = -std::numeric_limits<double>::infinity();
    double lo = std::numeric_limits<double>::infinity();
    for (StateIndex s = 0; s < n_states; ++s) {
      hi = std::max(hi, next[s] - current[s]);
      lo = std::min(lo, next[s] - current[s]);
    }
    if (hi - lo < epsilon) {
      out.gain = 0.5 * (hi + lo);
      const double base = *std::min_element(current.begin(), current.end());
      for (double& v : current) v = keep * (v - base);
      out.value = std::move(current);
      out.iterations = iteration;
      return out;
    }
    const double shift = *std::min_element(next.begin(), next.end());
    for (StateIndex s = 0; s < n_states; ++s) current[s] = next[s] - shift;
  }
  throw NonConvergenceError("extended value iteration did not converge within " +
                            std::to_string(max_iterations) + " iterations");
}

bool contains_mdp(const PlausibleSet& set, const StationaryMdp& mdp) {
  if (mdp.n_states() != set.n_states || mdp.n_actions() != set.n_actions) {
    throw std::invalid_argument("contains_mdp: shape mismatch");
  }
  for (StateIndex s = 0; s < set.n_states; ++s) {
    for (ActionIndex a = 0; a < set.n_actions; ++a) {
      const std::size_t sa = s * set.n_actions + a;
      if (std::abs(mdp.reward(s, a) - set.r_hat[sa]) > set.width_r[sa] + kContainmentSlack) {
        return false;
      }
      if (l1_distance(mdp.row(s, a), set.p_hat_row(s, a)) > set.width_p[sa] + kContainmentSlack) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace vucrl
