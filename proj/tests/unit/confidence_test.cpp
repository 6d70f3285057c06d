#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "vucrl/confidence.hpp"

namespace vucrl {
namespace {

TEST(BuildEstimates, ZeroCountsDefault) {
  const VisitStatistics stats(3, 2);
  const auto est = build_estimates(stats);
  for (double r : est.r_hat) EXPECT_EQ(r, 0.0);
  for (double p : est.p_hat) EXPECT_DOUBLE_EQ(p, 1.0 / 3.0);
}

TEST(BuildEstimates, SampleMeansIgnoreOrder) {
  VisitStatistics forward(2, 1);
  VisitStatistics backward(2, 1);
  const std::vector<std::pair<double, std::size_t>> samples{{1, 0}, {0, 0}, {1, 1}, {1, 0}};
  for (const auto& [r, next] : samples) forward.record(0, 0, r, next);
  for (auto it = samples.rbegin(); it != samples.rend(); ++it) backward.record(0, 0, it->first, it->second);
  forward.close_episode();
  const auto a = build_estimates(forward);
  const auto b = build_estimates(backward);
  EXPECT_DOUBLE_EQ(a.r_hat[0], 0.75);
  EXPECT_DOUBLE_EQ(a.p_hat[0], 0.75);
  EXPECT_DOUBLE_EQ(a.p_hat[1], 0.25);
  EXPECT_EQ(a.r_hat, b.r_hat);
  EXPECT_EQ(a.p_hat, b.p_hat);
}

TEST(VisitStatistics, EpisodeBookkeeping) {
  VisitStatistics stats(2, 2);
  stats.record(1, 0, 1.0, 0);
  stats.record(1, 0, 0.0, 1);
  EXPECT_EQ(stats.n_episode(1, 0), 2u);
  EXPECT_EQ(stats.n_before(1, 0), 0u);
  stats.close_episode();
  EXPECT_EQ(stats.n_episode(1, 0), 0u);
  EXPECT_EQ(stats.n_before(1, 0), 2u);
  EXPECT_EQ(stats.transition_count(1, 0, 0) + stats.transition_count(1, 0, 1), 2u);
  EXPECT_THROW(stats.record(2, 0, 0.0, 0), std::invalid_argument);
  EXPECT_THROW(stats.record(0, 0, 1.5, 0), std::invalid_argument);
}

TEST(PlausibleSet, WidthFormulas) {
  VisitStatistics stats(2, 2);
  for (int i = 0; i < 7; ++i) stats.record(0, 1, 1.0, 1);
  stats.close_episode();
  const auto set = make_plausible_set(stats, 9, 0.1, 0.05, 0.2);
  const double log_term = std::log(8.0 * 2 * 2 * 729.0 / 0.1);
  EXPECT_DOUBLE_EQ(set.width_r[1], 0.05 + std::sqrt(8.0 * log_term / 7.0));
  EXPECT_DOUBLE_EQ(set.width_p[1], std::min(2.0, 0.2 + std::sqrt(16.0 * log_term / 7.0)));
  EXPECT_DOUBLE_EQ(set.width_r[0], 0.05 + std::sqrt(8.0 * log_term));
}

TEST(PlausibleSet, ZeroCountWidthClipsToTwo) {
  const VisitStatistics stats(2, 2);
  const auto set = make_plausible_set(stats, 1, 0.1, 0.0, 0.0);
  for (double w : set.width_p) EXPECT_EQ(w, 2.0);
}

TEST(PlausibleSet, RewardWidthTendsToVariation) {
  EXPECT_NEAR(reward_confidence_width(3, 2, 100, 0.05, 0.3, 1'000'000'000'000ULL), 0.3, 1e-4);
}

TEST(PlausibleSet, DoublingCountShrinksBySqrtTwo) {
  const double a = reward_confidence_width(3, 2, 50, 0.05, 0.0, 40);
  const double b = reward_confidence_width(3, 2, 50, 0.05, 0.0, 80);
  EXPECT_NEAR(b, a / std::sqrt(2.0), 1e-15);
  const double c = transition_confidence_width(30, 2, 50, 0.05, 0.0, 4000);
  const double d = transition_confidence_width(30, 2, 50, 0.05, 0.0, 8000);
  EXPECT_NEAR(d, c / std::sqrt(2.0), 1e-15);
}

TEST(PlausibleSet, RejectsBadArguments) {
  const VisitStatistics stats(2, 2);
  EXPECT_THROW(make_plausible_set(stats, 0, 0.1, 0, 0), std::invalid_argument);
  EXPECT_THROW(make_plausible_set(stats, 1, 1.0, 0, 0), std::invalid_argument);
  EXPECT_THROW(make_plausible_set(stats, 1, 0.1, -1, 0), std::invalid_argument);
}

TEST(InnerMax, Examples) {
  const std::vector<double> p{0.5, 0.5};
  const std::vector<StateIndex> order{1, 0};
  EXPECT_EQ(inner_max_transition(p, 0.0, order), p);
  const auto moved = inner_max_transition(p, 0.4, order);
  EXPECT_NEAR(moved[0], 0.3, 1e-15);
  EXPECT_NEAR(moved[1], 0.7, 1e-15);
  const auto all = inner_max_transition(std::vector<double>{0.2, 0.3, 0.5}, 2.0,
                                        std::vector<StateIndex>{1, 2, 0});
  EXPECT_NEAR(all[0], 0.0, 1e-15);
  EXPECT_NEAR(all[1], 1.0, 1e-15);
  EXPECT_NEAR(all[2], 0.0, 1e-15);
}

TEST(InnerMax, MatchesGridSearch) {
  std::mt19937_64 engine(2024);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const auto check = [&](std::size_t n, int resolution, double max_width, int trials) {
    for (int trial = 0; trial < trials; ++trial) {
      // Grid-aligned p_hat so the grid oracle sees the exact centre.
      std::vector<long> units(n, 0);
      for (int k = 0; k < resolution; ++k) ++units[engine() % n];
      std::vector<double> p_hat(n);
      std::vector<double> u(n);
      for (std::size_t i = 0; i < n; ++i) p_hat[i] = double(units[i]) / resolution;
      for (auto& x : u) x = unit(engine);
      const double width = max_width * unit(engine);
      const auto q = inner_max_transition(p_hat, width, order_by_value_descending(u));
      double value = 0.0;
      double mass = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        value += q[i] * u[i];
        mass += q[i];
        EXPECT_GE(q[i], 0.0);
      }
      EXPECT_NEAR(mass, 1.0, 1e-12);
      EXPECT_LE(l1_distance(q, p_hat), width + 1e-12);
      const double grid = oracle::grid_inner_max(p_hat, width, u, resolution);
      // Dominance over every grid point, and the grid gets within a cell.
      EXPECT_GE(value, grid - 1e-12);
      EXPECT_LE(value - grid, 2e-3);
    }
  };
  check(3, 1000, 2.0, 40);
  check(5, 1000, 0.02, 20);
}

TEST(Evi, ZeroWidthMatchesSolver) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto mdp = oracle::random_mdp(seed, 2 + seed % 4, 1 + seed % 3);
    const auto evi = extended_value_iteration(point_set(mdp), 1e-8);
    EXPECT_NEAR(evi.gain, oracle::enumerated_optimal_gain(mdp), 2e-8);
    EXPECT_GE(evi.gain, 0.0);
    EXPECT_LE(evi.gain, 1.0);
  }
}

TEST(Evi, AllRewardsOneGivesGainOne) {
  VisitStatistics stats(3, 2);
  for (StateIndex s = 0; s < 3; ++s)
    for (ActionIndex a = 0; a < 2; ++a)
      for (int i = 0; i < 5; ++i) stats.record(s, a, 1.0, (s + a) % 3);
  stats.close_episode();
  const auto set = make_plausible_set(stats, 100, 0.05, 0.0, 0.0);
  EXPECT_NEAR(extended_value_iteration(set, 1e-8).gain, 1.0, 1e-8);
}

TEST(Evi, FullTransitionWidthReachesBestReward) {
  PlausibleSet set;
  set.n_states = 3;
  set.n_actions = 1;
  set.r_hat = {0.0, 1.0, 0.0};
  set.p_hat = {1, 0, 0, 0, 0, 1, 0, 1, 0};
  set.width_r = {0, 0, 0};
  set.width_p = {2, 2, 2};
  EXPECT_NEAR(extended_value_iteration(set, 1e-8).gain, 1.0, 1e-8);
}

TEST(Evi, OptimisticModelInvariants) {
  VisitStatistics stats(4, 2);
  const auto mdp = oracle::random_mdp(3, 4, 2);
  Rng rng(8);
  StateIndex s = 0;
  for (int i = 0; i < 400; ++i) {
    const ActionIndex a = rng.index(2);
    const auto out = sample_step(mdp, s, a, rng);
    stats.record(s, a, out.reward, out.next_state);
    s = out.next_state;
  }
  stats.close_episode();
  const auto set = make_plausible_set(stats, 401, 0.05, 0.01, 0.02);
  const auto evi = extended_value_iteration(set, 1e-6);
  const auto optimistic = evi.optimistic_mdp();
  EXPECT_TRUE(contains_mdp(set, optimistic));
  for (std::size_t sa = 0; sa < set.r_hat.size(); ++sa) {
    EXPECT_LE(evi.optimistic_reward[sa], std::min(1.0, set.r_hat[sa] + set.width_r[sa]));
  }
  EXPECT_EQ(*std::min_element(evi.value.begin(), evi.value.end()), 0.0);
  // Optimism: any contained MDP has no larger gain.
  EXPECT_TRUE(contains_mdp(set, mdp));
  EXPECT_GE(evi.gain + 2e-6, relative_value_iteration(mdp).gain);
}

TEST(Evi, MonotoneInVariationWidening) {
  VisitStatistics stats(3, 2);
  const auto mdp = oracle::random_mdp(4, 3, 2);
  Rng rng(1);
  StateIndex s = 0;
  for (int i = 0; i < 3000; ++i) {
    const ActionIndex a = rng.index(2);
    const auto out = sample_step(mdp, s, a, rng);
    stats.record(s, a, out.reward, out.next_state);
    s = out.next_state;
  }
  stats.close_episode();
  double previous = -1.0;
  for (double v : {0.0, 0.01, 0.05, 0.1, 0.3}) {
    const double gain =
        extended_value_iteration(make_plausible_set(stats, 3001, 0.05, v, 2 * v), 1e-8).gain;
    EXPECT_GE(gain, previous - 1e-8);
    previous = gain;
  }
}

TEST(ContainsMdp, Examples) {
  const auto mdp = oracle::random_mdp(6, 2, 2);
  const VisitStatistics empty(2, 2);
  EXPECT_TRUE(contains_mdp(make_plausible_set(empty, 1, 0.05, 0, 0), mdp));
  auto set = point_set(mdp);
  EXPECT_TRUE(contains_mdp(set, mdp));
  set.width_r.assign(4, 0.1);
  set.r_hat[0] = mdp.reward(0, 0) + 0.11;
  if (set.r_hat[0] > 1.0) set.r_hat[0] = mdp.reward(0, 0) - 0.11;
  EXPECT_FALSE(contains_mdp(set, mdp));
}

}  // namespace
}  // namespace vucrl
