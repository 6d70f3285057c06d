#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "vucrl/learner.hpp"
#include "vucrl/nonstationary.hpp"

namespace vucrl {

/// Largest T * S table the backward induction will materialize.
inline constexpr std::size_t kValueTableCap = 100'000'000;

struct OptimalValue {
  /// Optimal expected reward over the window, started in the requested state.
  double v_star = 0.0;
  /// Optimal window values from every start state.
  std::vector<double> start_values;
  /// Row-major T x S: entry (i, s) is the optimal reward-to-go from state s
  /// at window step i (0-based). Empty unless requested.
  std::vector<double> value_table;
  /// Row-major T x S optimal actions (lowest index on ties). Empty unless requested.
  std::vector<ActionIndex> action_table;
};

struct TStepOptions {
  /// First global step of the window (1-based).
  std::size_t start_step = 1;
  bool keep_tables = false;
};

/// Exact optimal expected reward of a (time-dependent) policy over
/// `steps` steps, by backward induction on the environment's snapshots.
/// Throws SizeLimitError when tables are requested and steps * S exceeds
/// kValueTableCap.
OptimalValue optimal_tstep_value(const NonstationaryMdp& env, StateIndex s1, std::size_t steps,
                                 const TStepOptions& options = {});

struct BoundCheck {
  std::string name;
  double value = 0.0;
  bool satisfied = false;
};

struct RegretReport {
  double v_star_T = 0.0;
  double realized_reward = 0.0;
  /// v_star_T - realized_reward; negative on lucky runs.
  double regret = 0.0;
  /// Entry t-1: expected reward of the optimal T-step policy over steps 1..t
  /// minus the realized reward over the same steps. The last entry equals
  /// `regret`.
  std::vector<double> regret_curve;
  /// sum_t (rho*(M_t) - r_t).
  std::optional<double> alt_regret;
  std::vector<BoundCheck> bound_checks;
};

/// Regret of a recorded run against the backward-induction optimum from the
/// environment's initial state. The record must cover steps 1..T exactly.
/// `include_alt` also evaluates the per-step-gain regret (capped like the
/// global variation).
RegretReport evaluate_regret(const RunRecord& record, const NonstationaryMdp& env,
                             bool include_alt = false);

}  // namespace vucrl
