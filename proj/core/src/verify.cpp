#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>
#include <sstream>
#include <string>

#include "vucrl/harness.hpp"
#include "vucrl/regret_bounds.hpp"

namespace vucrl {

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buffer[256];
  std::snprintf(buffer, sizeof buffer, pattern, a, b, c);
  return buffer;
}

Verdict global_variation_suite() {
  std::size_t held = 0;
  std::size_t total = 0;
  double worst = -std::numeric_limits<double>::infinity();
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const std::size_t horizon = 50 + 15 * seed % 150;
    const auto env = seed % 2 ? make_abrupt(seed, 3, 2, horizon, 1 + seed % 5, 0.2)
                              : make_gradual(seed, 3, 2, horizon, 0.2 + 0.1 * (seed % 4));
    const auto check = check_global_variation_bound(env);
    held += check.holds;
    ++total;
    worst = std::max(worst, check.v_global - check.bound);
  }
  return {held == total, fmt("%.0f/%.0f environments, worst excess %.3g", double(held),
                             double(total), worst)};
}

Verdict evi_matches_vi_suite() {
  Rng rng(derive_seed(7, 1));
  double worst = 0.0;
  for (int i = 0; i < 30; ++i) {
    const auto mdp = random_dense_mdp(rng, 2 + rng.index(4), 1 + rng.index(3));
    const double vi = relative_value_iteration(mdp).gain;
    const double evi = extended_value_iteration(point_set(mdp), 1e-9).gain;
    worst = std::max(worst, std::abs(vi - evi));
  }
  return {worst <= 2e-6, fmt("30 MDPs, max |gain difference| %.3g", worst)};
}

// Random points of the L1 ball around p_hat, projected to the simplex by
// shrinking toward p_hat.
Verdict inner_max_suite() {
  Rng rng(derive_seed(11, 1));
  std::size_t violations = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng.index(5);
    std::vector<double> p_hat(n);
    std::vector<double> u(n);
    double sum = 0.0;
    for (auto& p : p_hat) sum += (p = rng.exponential());
    for (auto& p : p_hat) p /= sum;
    for (auto& x : u) x = rng.uniform();
    const double width = rng.uniform(0.0, 2.0);
    const auto order = order_by_value_descending(u);
    const auto q = inner_max_transition(p_hat, width, order);
    double q_value = 0.0;
    for (std::size_t s = 0; s < n; ++s) q_value += q[s] * u[s];
    if (l1_distance(q, p_hat) > width + 1e-12) ++violations;
    for (int k = 0; k < 50; ++k) {
      std::vector<double> p(n);
      double total = 0.0;
      for (auto& x : p) total += (x = rng.exponential());
      for (auto& x : p) x /= total;
      const double distance = l1_distance(p, p_hat);
      const double shrink = distance > width ? width / distance : 1.0;
      double value = 0.0;
      for (std::size_t s = 0; s < n; ++s) {
        value += (p_hat[s] + shrink * (p[s] - p_hat[s])) * u[s];
      }
      if (value > q_value + 1e-12) ++violations;
    }
  }
  return {violations == 0, fmt("200 rows x 50 ball points, %.0f violations", double(violations))};
}

Verdict counting_suite() {
  std::size_t runs = 0;
  std::size_t episode_fail = 0;
  std::size_t ratio_fail = 0;
  std::size_t phase_fail = 0;
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const auto env = make_gradual(seed, 3, 2, 3000, 0.5);
    const auto summary = variation(env, false);
    const double v = summary.v_r + summary.v_p;
    for (auto mode : {LearnerMode::no_restart, LearnerMode::variation_restart,
                      LearnerMode::zero_variation_restart}) {
      LearnerConfig config;
      config.mode = mode;
      config.known_variation = true;
      const auto record = run_learner(env, config, derive_seed(seed, 1));
      ++runs;
      for (const auto& phase : record.phases) {
        const std::size_t pairs = env.n_states() * env.n_actions();
        if (phase.length > pairs &&
            double(phase.episodes) > episode_count_bound(env.n_states(), env.n_actions(),
                                                         phase.length)) {
          ++episode_fail;
        }
        if (phase.visit_ratio_sum >
            visit_ratio_bound(env.n_states(), env.n_actions(), phase.length)) {
          ++ratio_fail;
        }
      }
      if (mode != LearnerMode::no_restart && v > 0.0 &&
          !(double(record.phases.size()) < phase_count_bound(v, env.horizon()))) {
        ++phase_fail;
      }
    }
  }
  return {episode_fail + ratio_fail + phase_fail == 0,
          fmt("%.0f runs; phase violations: episodes %.0f, visit sum %.0f", double(runs),
              double(episode_fail), double(ratio_fail)) +
              fmt(", phase count %.0f", double(phase_fail))};
}

Verdict fixture_suite() {
  const double d = 10.0;
  const auto fixture = mixture_diameter_fixture(d);
  const double d1 = diameter(fixture.m1);
  const double d2 = diameter(fixture.m2);
  const double mixed = diameter(fixture.mixture);
  const bool pass = std::abs(d1 - d) <= 1e-6 && std::abs(d2 - d) <= 1e-6 && std::isinf(mixed);
  return {pass, fmt("D=%g, measured %.9g and %.9g", d, d1, d2) +
                    (std::isinf(mixed) ? ", mixture diameter infinite" : ", mixture finite")};
}

Verdict monotonicity_suite() {
  std::size_t checked = 0;
  double worst = -std::numeric_limits<double>::infinity();
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto env = make_abrupt(seed, 3, 2, 2000, 3, 0.2);
    const auto summary = variation(env, false);
    const double allowance = summary.v_r + summary.d_max * summary.v_p;
    std::vector<std::pair<VisitStatistics, std::size_t>> snapshots;
    RunObserver observer;
    observer.on_episode = [&](const EpisodeContext& ctx) {
      if (ctx.episode_in_phase % 3 == 1) snapshots.emplace_back(ctx.stats, ctx.t_local);
    };
    LearnerConfig config;
    config.known_variation = true;
    run_learner(env, config, derive_seed(seed, 1), &observer);
    for (const auto& [stats, t_k] : snapshots) {
      const double widened =
          extended_value_iteration(
              make_plausible_set(stats, t_k, config.delta, summary.v_r, summary.v_p), 1e-7)
              .gain;
      const double plain =
          extended_value_iteration(make_plausible_set(stats, t_k, config.delta, 0.0, 0.0), 1e-7)
              .gain;
      worst = std::max(worst, widened - plain - allowance);
      ++checked;
    }
  }
  return {worst <= 1e-4, fmt("%.0f snapshots, max excess %.3g", double(checked), worst)};
}

// Replications of the variation-restart learner with true per-phase
// variation; a replication fails if some step's plausible set misses M_t
// or some episode has v*_T(s) > T rho_k + D within its phase.
Verdict optimism_suite(std::ostream& out) {
  constexpr std::size_t kReplications = 200;
  constexpr double kDelta = 0.05;
  std::size_t failures = 0;
  for (std::uint64_t seed = 1; seed <= kReplications; ++seed) {
    const auto env = make_gradual(derive_seed(seed, 0), 4, 2, 5000, 1.0);
    const double d = variation(env, false).d_max;
    LearnerConfig config;
    config.mode = LearnerMode::variation_restart;
    config.known_variation = true;
    config.delta = kDelta;
    bool failed = false;
    std::vector<double> phase_values;
    std::size_t phase_seen = 0;
    RunObserver observer;
    observer.on_episode = [&](const EpisodeContext& ctx) {
      if (ctx.phase != phase_seen) {
        phase_seen = ctx.phase;
        phase_values = optimal_tstep_value(env, ctx.state, ctx.phase_record.length,
                                           {.start_step = ctx.phase_record.start})
                           .start_values;
      }
      const double length = double(ctx.phase_record.length);
      const double top = *std::max_element(phase_values.begin(), phase_values.end());
      if (top > length * ctx.evi.gain + d) failed = true;
    };
    observer.on_step = [&](std::size_t t, const PlausibleSet& set) {
      if (!failed && !contains_mdp(set, env.snapshot(t))) failed = true;
    };
    run_learner(env, config, derive_seed(seed, 1), &observer);
    failures += failed;
  }
  const double fraction = double(failures) / double(kReplications);
  out << "  coverage failure fraction " << fraction << " (delta " << kDelta << ")\n";
  return {fraction <= kDelta + 0.03,
          fmt("%.0f/%.0f replications failed, threshold %.2f", double(failures),
              double(kReplications), kDelta + 0.03)};
}

}  // namespace

int cli_verify(VerifyLevel level, std::ostream& out) {
  std::vector<std::pair<std::string, std::function<Verdict()>>> suites = {
      {"global-variation-bound", global_variation_suite},
      {"evi-matches-vi", evi_matches_vi_suite},
      {"inner-max-dominance", inner_max_suite},
      {"counting-bounds", counting_suite},
      {"mixture-fixture", fixture_suite},
      {"optimism-monotonicity", monotonicity_suite},
  };
  if (level == VerifyLevel::full) {
    suites.emplace_back("optimism-coverage", [&out] { return optimism_suite(out); });
  }
  int status = 0;
  for (const auto& [name, suite] : suites) {
    Verdict verdict;
    try {
      verdict = suite();
    } catch (const std::exception& e) {
      verdict = {false, std::string("error: ") + e.what()};
    }
    out << (verdict.pass ? "PASS " : "FAIL ") << name << ": " << verdict.detail << '\n';
    if (!verdict.pass) status = 1;
  }
  return status;
}

}  // namespace vucrl
