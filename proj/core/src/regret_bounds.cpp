#include "vucrl/regret_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace vucrl {

namespace {

double as_double(std::size_t n) { return static_cast<double>(n); }

}  // namespace

double no_restart_regret_bound(double diameter, std::size_t n_states, std::size_t n_actions,
                               std::size_t horizon, double delta, double v_r, double v_p) {
  const double s = as_double(n_states);
  const double a = as_double(n_actions);
  const double t = as_double(horizon);
  return 32.0 * diameter * s * std::sqrt(a * t * std::log(8.0 * s * a * t * t * t / delta)) +
         2.0 * t * (v_r + diameter * v_p);
}

double variation_restart_regret_bound(double diameter, std::size_t n_states,
                                      std::size_t n_actions, std::size_t horizon, double delta,
                                      double total_variation) {
  const double s = as_double(n_states);
  const double a = as_double(n_actions);
  const double t = as_double(horizon);
  return 74.0 * std::cbrt(total_variation) * std::pow(t, 2.0 / 3.0) * diameter * s *
         std::sqrt(a * std::log(16.0 * s * s * a * std::pow(t, 5.0) / delta));
}

double count_restart_regret_bound(double diameter, std::size_t n_states, std::size_t n_actions,
                                  std::size_t horizon, double delta, std::size_t l_changes) {
  const double s = as_double(n_states);
  const double a = as_double(n_actions);
  const double t = as_double(horizon);
  return 65.0 * std::cbrt(as_double(l_changes) + 1.0) * std::pow(t, 2.0 / 3.0) * diameter * s *
         std::sqrt(a * std::log(t / delta));
}

double episode_count_bound(std::size_t n_states, std::size_t n_actions, std::size_t steps) {
  const double pairs = as_double(n_states * n_actions);
  return pairs * std::log2(as_double(steps) / pairs);
}

double visit_ratio_bound(std::size_t n_states, std::size_t n_actions, std::size_t steps) {
  return (std::sqrt(2.0) + 1.0) * std::sqrt(as_double(n_states * n_actions * steps));
}

double phase_count_bound(double total_variation, std::size_t horizon) {
  return 1.0 + std::cbrt(3.0 * total_variation * total_variation * as_double(horizon));
}

std::vector<BoundCheck> assert_regret_bounds(const RunRecord& record, const NonstationaryMdp& env,
                                             const RegretReport& report) {
  const auto summary = variation(env, false);
  const double d = summary.d_max;
  const std::size_t s = env.n_states();
  const std::size_t a = env.n_actions();
  const std::size_t t = env.horizon();
  const auto& config = record.config;
  const double schedule_variation =
      config.known_variation ? summary.v_r + summary.v_p : config.v_tilde_r + config.v_tilde_p;

  BoundCheck check;
  switch (config.mode) {
    case LearnerMode::no_restart: {
      // Widening below the true variation is covered by the true values.
      const double widen_r = record.phases.empty() ? 0.0 : record.phases.front().v_tilde_r;
      const double widen_p = record.phases.empty() ? 0.0 : record.phases.front().v_tilde_p;
      check.name = "no-restart-bound";
      check.value = no_restart_regret_bound(d, s, a, t, config.delta, std::max(widen_r, summary.v_r),
                                            std::max(widen_p, summary.v_p));
      break;
    }
    case LearnerMode::variation_restart:
    case LearnerMode::zero_variation_restart:
      check.name = "variation-restart-bound";
      check.value =
          schedule_variation > 0.0
              ? variation_restart_regret_bound(d, s, a, t, config.delta, schedule_variation)
              // A zero-variation schedule is one unrestarted phase at delta / 2.
              : no_restart_regret_bound(d, s, a, t, config.delta / 2.0, 0.0, 0.0);
      break;
    case LearnerMode::count_restart:
      check.name = "count-restart-bound";
      check.value = count_restart_regret_bound(d, s, a, t, config.delta,
                                               config.l_changes.value_or(0));
      break;
  }
  check.satisfied = report.regret <= check.value;
  return {check};
}

}  // namespace vucrl
