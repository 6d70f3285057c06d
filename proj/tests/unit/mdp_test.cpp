#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "vucrl/errors.hpp"
#include "vucrl/mdp.hpp"

namespace vucrl {
namespace {

StationaryMdp one_state(double reward) { return StationaryMdp(1, 1, {reward}, {1.0}); }

StationaryMdp swap_chain(double r0, double r1) {
  return StationaryMdp(2, 1, {r0, r1}, {0.0, 1.0, 1.0, 0.0});
}

TEST(StationaryMdp, RejectsBrokenInvariants) {
  EXPECT_THROW(StationaryMdp(1, 1, {1.5}, {1.0}), std::invalid_argument);
  EXPECT_THROW(StationaryMdp(2, 1, {0.1, 0.1}, {0.5, 0.6, 1.0, 0.0}), std::invalid_argument);
  EXPECT_THROW(StationaryMdp(2, 1, {0.1, 0.1}, {-0.1, 1.1, 1.0, 0.0}), std::invalid_argument);
  EXPECT_THROW(StationaryMdp(2, 1, {0.1}, {0.0, 1.0, 1.0, 0.0}), std::invalid_argument);
}

TEST(RelativeValueIteration, SingleState) {
  const auto result = relative_value_iteration(one_state(0.5));
  EXPECT_NEAR(result.gain, 0.5, 1e-12);
  ASSERT_EQ(result.value.size(), 1u);
  EXPECT_EQ(result.value[0], 0.0);
}

TEST(RelativeValueIteration, PeriodicSwapAverages) {
  EXPECT_NEAR(relative_value_iteration(swap_chain(1.0, 0.0)).gain, 0.5, 1e-9);
}

TEST(RelativeValueIteration, MatchesPolicyEnumeration) {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const auto mdp = oracle::random_mdp(seed, 4, 2);
    const auto result = relative_value_iteration(mdp);
    EXPECT_NEAR(result.gain, oracle::enumerated_optimal_gain(mdp), 1e-6) << "seed " << seed;
    EXPECT_EQ(*std::min_element(result.value.begin(), result.value.end()), 0.0);
  }
}

TEST(RelativeValueIteration, ReportsNonConvergenceWithCap) {
  // Two absorbing states with different rewards: multichain, no single gain.
  const StationaryMdp split(2, 1, {1.0, 0.0}, {1.0, 0.0, 0.0, 1.0});
  try {
    relative_value_iteration(split, 1e-9, 500);
    FAIL() << "expected NonConvergenceError";
  } catch (const NonConvergenceError& e) {
    EXPECT_NE(std::string(e.what()).find("500"), std::string::npos);
  }
}

TEST(Diameter, Trivial) {
  EXPECT_EQ(diameter(one_state(0.2)), 0.0);
  EXPECT_NEAR(diameter(swap_chain(0.0, 0.0)), 1.0, 1e-9);
}

TEST(Diameter, MatchesEnumeratedHittingTimes) {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    const auto mdp = oracle::random_mdp(seed * 31, 4, 2);
    EXPECT_NEAR(diameter(mdp), oracle::enumerated_diameter(mdp), 1e-6) << "seed " << seed;
  }
}

TEST(Diameter, InvariantUnderStateRelabeling) {
  const auto mdp = oracle::random_mdp(99, 4, 2);
  const std::vector<std::size_t> perm{2, 0, 3, 1};
  std::vector<double> rewards(mdp.rewards().size());
  std::vector<double> transitions(mdp.transitions().size());
  for (std::size_t s = 0; s < 4; ++s) {
    for (std::size_t a = 0; a < 2; ++a) {
      rewards[perm[s] * 2 + a] = mdp.reward(s, a);
      for (std::size_t j = 0; j < 4; ++j) {
        transitions[(perm[s] * 2 + a) * 4 + perm[j]] = mdp.probability(s, a, j);
      }
    }
  }
  const StationaryMdp relabeled(4, 2, rewards, transitions);
  EXPECT_NEAR(diameter(relabeled), diameter(mdp), 1e-9);
}

TEST(Diameter, DisconnectedIsInfinite) {
  const StationaryMdp split(2, 1, {0.5, 0.5}, {1.0, 0.0, 0.0, 1.0});
  EXPECT_TRUE(std::isinf(diameter(split)));
  EXPECT_FALSE(is_communicating(split));
}

TEST(PolicyGainBias, Examples) {
  const auto single = policy_gain_bias(one_state(0.3), {{0}});
  EXPECT_NEAR(single.gain, 0.3, 1e-12);
  EXPECT_EQ(single.span, 0.0);

  const auto cycle = policy_gain_bias(swap_chain(1.0, 0.0), {{0, 0}});
  EXPECT_NEAR(cycle.gain, 0.5, 1e-9);
  EXPECT_NEAR(cycle.span, 0.5, 1e-9);
  EXPECT_NEAR(cycle.bias[0] - cycle.bias[1], 0.5, 1e-9);
}

TEST(PolicyGainBias, PoissonResidualAndSpanBound) {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    const auto mdp = oracle::random_mdp(seed * 7, 5, 2);
    const auto optimum = relative_value_iteration(mdp);
    const auto gb = policy_gain_bias(mdp, optimum.policy);
    EXPECT_LE(poisson_residual(mdp, optimum.policy, gb), 1e-7);
    EXPECT_DOUBLE_EQ(gb.span, *std::max_element(gb.bias.begin(), gb.bias.end()) -
                                  *std::min_element(gb.bias.begin(), gb.bias.end()));
    EXPECT_LE(gb.span, diameter(mdp) + 1e-6);
    EXPECT_LE(gb.gain, optimum.gain + 2e-9);
    EXPECT_NEAR(gb.gain,
                oracle::stationary_policy_gain(mdp, optimum.policy.action_of), 1e-8);
  }
}

TEST(PolicyGainBias, NeverExceedsOptimalGain) {
  const auto mdp = oracle::random_mdp(5, 3, 3);
  const double best = relative_value_iteration(mdp).gain;
  for (std::size_t a0 = 0; a0 < 3; ++a0)
    for (std::size_t a1 = 0; a1 < 3; ++a1)
      for (std::size_t a2 = 0; a2 < 3; ++a2) {
        EXPECT_LE(policy_gain_bias(mdp, {{a0, a1, a2}}).gain, best + 2e-9);
      }
}

TEST(SampleStep, DegenerateLaws) {
  const StationaryMdp mdp(2, 2, {1.0, 0.0, 0.5, 0.5}, {0, 1, 1, 0, 0.5, 0.5, 0.5, 0.5});
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    const auto always = sample_step(mdp, 0, 0, rng);
    EXPECT_EQ(always.reward, 1.0);
    EXPECT_EQ(always.next_state, 1u);
    const auto never = sample_step(mdp, 0, 1, rng);
    EXPECT_EQ(never.reward, 0.0);
    EXPECT_EQ(never.next_state, 0u);
  }
}

TEST(SampleStep, ReproducibleAndUnbiased) {
  const auto mdp = oracle::random_mdp(11, 3, 2);
  Rng a(42);
  Rng b(42);
  double reward = 0.0;
  std::vector<double> counts(3, 0.0);
  constexpr int kDraws = 100000;
  for (int i = 0; i < kDraws; ++i) {
    const auto x = sample_step(mdp, 1, 1, a);
    const auto y = sample_step(mdp, 1, 1, b);
    ASSERT_EQ(x.reward, y.reward);
    ASSERT_EQ(x.next_state, y.next_state);
    reward += x.reward;
    counts[x.next_state] += 1.0;
  }
  EXPECT_NEAR(reward / kDraws, mdp.reward(1, 1), 0.01);
  for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(counts[j] / kDraws, mdp.probability(1, 1, j), 0.01);
}

TEST(StationaryMdpJson, RoundTripsExactly) {
  const auto mdp = oracle::random_mdp(17, 3, 2);
  const auto back = stationary_mdp_from_json(to_json(mdp));
  EXPECT_EQ(back, mdp);
  EXPECT_THROW(stationary_mdp_from_json("{\"n_states\": 1}"), FormatError);
}

TEST(Helpers, BlendAndDistances) {
  const StationaryMdp a(1, 1, {0.2}, {1.0});
  const StationaryMdp b(1, 1, {0.6}, {1.0});
  EXPECT_NEAR(blend(a, b, 0.5).reward(0, 0), 0.4, 1e-15);
  const std::vector<double> x{0.5, 0.5};
  const std::vector<double> y{0.8, 0.2};
  EXPECT_NEAR(l1_distance(x, y), 0.6, 1e-15);
  EXPECT_NEAR(span_of(y), 0.6, 1e-15);
}

}  // namespace
}  // namespace vucrl
