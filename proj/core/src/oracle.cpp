#include "vucrl/oracle.hpp"

#include <stdexcept>
#include <string>

#include "snapshot_cursor.hpp"
#include "vucrl/errors.hpp"

namespace vucrl {

OptimalValue optimal_tstep_value(const NonstationaryMdp& env, StateIndex s1, std::size_t steps,
                                 const TStepOptions& options) {
  const std::size_t n_states = env.n_states();
  const std::size_t n_actions = env.n_actions();
  if (s1 >= n_states) throw std::invalid_argument("optimal_tstep_value: start state out of range");
  if (steps == 0 || options.start_step < 1 ||
      options.start_step + steps - 1 > env.horizon()) {
    throw std::invalid_argument("optimal_tstep_value: window exceeds the environment horizon");
  }
  if (options.keep_tables && steps > kValueTableCap / n_states) {
    throw SizeLimitError("value table of " + std::to_string(steps) + " x " +
                         std::to_string(n_states) + " exceeds the size cap");
  }

  OptimalValue out;
  if (options.keep_tables) {
    out.value_table.resize(steps * n_states);
    out.action_table.resize(steps * n_states);
  }
  std::vector<double> to_go(n_states, 0.0);
  std::vector<double> next(n_states, 0.0);
  SnapshotCursor cursor(env);
  for (std::size_t i = steps; i-- > 0;) {
    const auto& mdp = cursor.at(options.start_step + i);
    for (StateIndex s = 0; s < n_states; ++s) {
      double best = -1.0;
      ActionIndex best_action = 0;
      for (ActionIndex a = 0; a < n_actions; ++a) {
        const auto row = mdp.row(s, a);
        double q = mdp.reward(s, a);
        for (StateIndex t = 0; t < n_states; ++t) q += row[t] * to_go[t];
        if (q > best) {
          best = q;
          best_action = a;
        }
      }
      next[s] = best;
      if (options.keep_tables) {
        out.value_table[i * n_states + s] = best;
        out.action_table[i * n_states + s] = best_action;
      }
    }
    to_go.swap(next);
  }
  out.v_star = to_go[s1];
  out.start_values = std::move(to_go);
  return out;
}

RegretReport evaluate_regret(const RunRecord& record, const NonstationaryMdp& env,
                             bool include_alt) {
  const std::size_t horizon = env.horizon();
  if (record.steps.size() != horizon) {
    throw std::invalid_argument("record covers " + std::to_string(record.steps.size()) +
                                " steps but the environment horizon is " +
                                std::to_string(horizon));
  }
  for (std::size_t i = 0; i < horizon; ++i) {
    if (record.steps[i].t != i + 1) throw std::invalid_argument("record steps are not 1..T");
  }
  if (record.n_states != env.n_states() || record.n_actions != env.n_actions()) {
    throw std::invalid_argument("record and environment shapes differ");
  }

  const std::size_t n_states = env.n_states();
  const auto optimum =
      optimal_tstep_value(env, env.initial_state(), horizon, {.start_step = 1, .keep_tables = true});

  RegretReport report;
  report.v_star_T = optimum.v_star;
  report.regret_curve.resize(horizon);

  // Expected prefix reward of the optimal policy, propagated forward.
  std::vector<double> occupancy(n_states, 0.0);
  std::vector<double> next(n_states, 0.0);
  occupancy[env.initial_state()] = 1.0;
  double expected = 0.0;
  double realized = 0.0;
  SnapshotCursor cursor(env);
  for (std::size_t i = 0; i < horizon; ++i) {
    const auto& mdp = cursor.at(i + 1);
    std::fill(next.begin(), next.end(), 0.0);
    for (StateIndex s = 0; s < n_states; ++s) {
      if (occupancy[s] == 0.0) continue;
      const ActionIndex a = optimum.action_table[i * n_states + s];
      expected += occupancy[s] * mdp.reward(s, a);
      const auto row = mdp.row(s, a);
      for (StateIndex t = 0; t < n_states; ++t) next[t] += occupancy[s] * row[t];
    }
    occupancy.swap(next);
    realized += record.steps[i].reward;
    report.regret_curve[i] = expected - realized;
  }
  report.realized_reward = realized;
  report.regret = report.v_star_T - report.realized_reward;
  report.regret_curve.back() = report.regret;

  if (include_alt) {
    if (env.distinct_snapshot_count() > kGlobalVariationCap) {
      throw SizeLimitError("per-step optimal gains exceed the solve cap");
    }
    std::vector<double> segment_gain;
    const bool per_segment = env.distinct_snapshot_count() == env.breakpoints().size();
    if (per_segment) {
      for (const auto& bp : env.breakpoints()) {
        segment_gain.push_back(relative_value_iteration(bp.mdp).gain);
      }
    }
    double alt = 0.0;
    for (std::size_t t = 1; t <= horizon; ++t) {
      const double gain = per_segment ? segment_gain[env.segment_of(t)]
                                      : relative_value_iteration(env.snapshot(t)).gain;
      alt += gain - record.steps[t - 1].reward;
    }
    report.alt_regret = alt;
  }
  return report;
}

}  // namespace vucrl
