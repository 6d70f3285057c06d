#pragma once

#include <cstddef>
#include <vector>

#include "vucrl/learner.hpp"
#include "vucrl/nonstationary.hpp"
#include "vucrl/oracle.hpp"

namespace vucrl {

// Closed-form high-probability guarantees, with constants as published.

/// 32 D S sqrt(A T ln(8 S A T^3 / delta)) + 2 T (v_r + D v_p).
double no_restart_regret_bound(double diameter, std::size_t n_states, std::size_t n_actions,
                               std::size_t horizon, double delta, double v_r, double v_p);

/// 74 V^(1/3) T^(2/3) D S sqrt(A ln(16 S^2 A T^5 / delta)), V = v_r + v_p.
double variation_restart_regret_bound(double diameter, std::size_t n_states,
                                      std::size_t n_actions, std::size_t horizon, double delta,
                                      double total_variation);

/// 65 (L+1)^(1/3) T^(2/3) D S sqrt(A ln(T / delta)).
double count_restart_regret_bound(double diameter, std::size_t n_states, std::size_t n_actions,
                                  std::size_t horizon, double delta, std::size_t l_changes);

/// S A log2(T / (S A)); meaningful for T > S A.
double episode_count_bound(std::size_t n_states, std::size_t n_actions, std::size_t steps);

/// (sqrt(2) + 1) sqrt(S A T).
double visit_ratio_bound(std::size_t n_states, std::size_t n_actions, std::size_t steps);

/// 1 + cbrt(3 V^2 T): strict upper bound on the number of phases for V > 0.
double phase_count_bound(double total_variation, std::size_t horizon);

/// Evaluates the guarantee matching the record's mode against its realized
/// regret, with D taken from the environment's diameter bound.
std::vector<BoundCheck> assert_regret_bounds(const RunRecord& record, const NonstationaryMdp& env,
                                             const RegretReport& report);

}  // namespace vucrl
