#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "vucrl/errors.hpp"
#include "vucrl/nonstationary.hpp"

namespace vucrl {

namespace {

constexpr std::size_t kResampleAttempts = 100;

// Moves each reward by at most `magnitude` and each row by at most
// `magnitude` in L1, clipping and renormalizing rows onto the simplex.
StationaryMdp perturb(const StationaryMdp& base, double magnitude, Rng& rng) {
  const std::size_t n_states = base.n_states();
  const std::size_t n_actions = base.n_actions();

  std::vector<double> reward = base.rewards();
  for (double& r : reward) r = std::clamp(r + rng.uniform(-magnitude, magnitude), 0.0, 1.0);

  std::vector<double> transition = base.transitions();
  std::vector<double> shift(n_states);
  for (std::size_t sa = 0; sa < n_states * n_actions; ++sa) {
    const auto original = base.row(sa / n_actions, sa % n_actions);
    double* row = transition.data() + sa * n_states;

    double mean = 0.0;
    for (double& z : shift) {
      z = rng.uniform(-1.0, 1.0);
      mean += z;
    }
    mean /= static_cast<double>(n_states);
    double size = 0.0;
    for (double& z : shift) {
      z -= mean;
      size += std::abs(z);
    }
    const double target = rng.uniform() * magnitude;
    if (size <= 0.0 || target <= 0.0) continue;

    double total = 0.0;
    for (std::size_t t = 0; t < n_states; ++t) {
      row[t] = std::max(0.0, original[t] + shift[t] * (target / size));
      total += row[t];
    }
    for (std::size_t t = 0; t < n_states; ++t) row[t] /= total;

    // Renormalization can stretch the move; pull back along the segment.
    double moved = 0.0;
    for (std::size_t t = 0; t < n_states; ++t) moved += std::abs(row[t] - original[t]);
    if (moved > magnitude) {
      const double keep = magnitude / moved;
      for (std::size_t t = 0; t < n_states; ++t) {
        row[t] = original[t] + (row[t] - original[t]) * keep;
      }
    }
  }
  return StationaryMdp(n_states, n_actions, std::move(reward), std::move(transition));
}

void require_shape(std::size_t n_states, std::size_t n_actions, std::size_t horizon) {
  if (n_states == 0 || n_actions == 0) {
    throw std::invalid_argument("generator needs positive state and action counts");
  }
  if (horizon == 0) throw std::invalid_argument("generator needs a positive horizon");
}

}  // namespace

NonstationaryMdp make_abrupt(std::uint64_t seed, std::size_t n_states, std::size_t n_actions,
                             std::size_t horizon, std::size_t n_changes,
                             double change_magnitude) {
  require_shape(n_states, n_actions, horizon);
  if (n_changes >= horizon) throw std::invalid_argument("make_abrupt: n_changes must be < horizon");
  if (!(change_magnitude >= 0.0 && change_magnitude <= 2.0)) {
    throw std::invalid_argument("make_abrupt: change_magnitude must lie in [0,2]");
  }

  Rng rng(seed);
  std::vector<Breakpoint> breakpoints;
  breakpoints.push_back({1, random_dense_mdp(rng, n_states, n_actions)});
  for (std::size_t j = 1; j <= n_changes; ++j) {
    const std::size_t step = 1 + (j * horizon) / (n_changes + 1);
    bool accepted = false;
    for (std::size_t attempt = 0; attempt < kResampleAttempts && !accepted; ++attempt) {
      auto candidate = perturb(breakpoints.back().mdp, change_magnitude, rng);
      if (is_communicating(candidate)) {
        breakpoints.push_back({step, std::move(candidate)});
        accepted = true;
      }
    }
    if (!accepted) {
      throw GenerationError("make_abrupt: no communicating perturbation after " +
                            std::to_string(kResampleAttempts) + " attempts");
    }
  }

  Provenance provenance{"abrupt",
                        seed,
                        {{"n_states", static_cast<double>(n_states)},
                         {"n_actions", static_cast<double>(n_actions)},
                         {"horizon", static_cast<double>(horizon)},
                         {"n_changes", static_cast<double>(n_changes)},
                         {"change_magnitude", change_magnitude}}};
  return NonstationaryMdp(horizon, std::move(breakpoints), Interpolation::piecewise_constant, 0,
                          std::move(provenance));
}

NonstationaryMdp make_gradual(std::uint64_t seed, std::size_t n_states, std::size_t n_actions,
                              std::size_t horizon, double total_variation_budget) {
  require_shape(n_states, n_actions, horizon);
  const double budget = total_variation_budget;
  if (!(budget >= 0.0) || !std::isfinite(budget)) {
    throw std::invalid_argument("make_gradual: budget must be a finite non-negative number");
  }
  if (budget > 0.0 && horizon < 2) {
    throw std::invalid_argument("make_gradual: a positive budget needs horizon >= 2");
  }
  Provenance provenance{"gradual",
                        seed,
                        {{"n_states", static_cast<double>(n_states)},
                         {"n_actions", static_cast<double>(n_actions)},
                         {"horizon", static_cast<double>(horizon)},
                         {"variation_budget", budget}}};

  Rng rng(seed);
  for (std::size_t attempt = 0; attempt < kResampleAttempts; ++attempt) {
    const auto start = random_dense_mdp(rng, n_states, n_actions);
    const auto end = random_dense_mdp(rng, n_states, n_actions);
    if (budget == 0.0) {
      return NonstationaryMdp(horizon, {{1, start}}, Interpolation::linear_blend, 0, provenance);
    }

    double reward_swing = 0.0;
    for (std::size_t i = 0; i < start.rewards().size(); ++i) {
      reward_swing = std::max(reward_swing, std::abs(end.rewards()[i] - start.rewards()[i]));
    }
    double row_swing = 0.0;
    for (StateIndex s = 0; s < n_states; ++s) {
      for (ActionIndex a = 0; a < n_actions; ++a) {
        row_swing = std::max(row_swing, l1_distance(start.row(s, a), end.row(s, a)));
      }
    }
    const double swing = reward_swing + row_swing;
    if (swing <= 0.0) continue;

    // Budgets beyond one full swing zig-zag between the endpoints.
    const auto segments = static_cast<std::size_t>(std::max(1.0, std::ceil(budget / swing)));
    if (segments > horizon - 1) {
      throw std::invalid_argument("make_gradual: budget too large for the horizon");
    }

    auto build = [&](double weight) {
      const auto far = blend(start, end, weight);
      std::vector<Breakpoint> breakpoints;
      for (std::size_t j = 0; j <= segments; ++j) {
        const std::size_t step = 1 + (j * (horizon - 1)) / segments;
        breakpoints.push_back({step, j % 2 == 0 ? start : far});
      }
      return NonstationaryMdp(horizon, std::move(breakpoints), Interpolation::linear_blend, 0,
                              provenance);
    };

    try {
      double weight = budget / (static_cast<double>(segments) * swing);
      auto env = build(weight);
      const auto measured = variation(env, false);
      const double total = measured.v_r + measured.v_p;
      // One post-hoc rescale absorbs rounding; the tiny shrink keeps the
      // measured total at or below the budget.
      weight = std::min(1.0, weight * (budget / total) * (1.0 - 1e-9));
      return build(weight);
    } catch (const std::invalid_argument&) {
      continue;  // a blend point was not communicating; resample the endpoints
    }
  }
  throw GenerationError("make_gradual: no communicating endpoints after " +
                        std::to_string(kResampleAttempts) + " attempts");
}

MixtureDiameterFixture mixture_diameter_fixture(double d) {
  if (!(d >= 2.0) || !std::isfinite(d)) throw std::invalid_argument("fixture requires D >= 2");
  const double leave = 1.0 / d;
  const std::vector<double> rewards(4, 0.5);
  // Row-major (state, action, next): s = 0, s' = 1, a = 0, a' = 1.
  StationaryMdp m1(2, 2, rewards,
                   {1.0 - leave, leave,  // p(.|s,a)
                    1.0, 0.0,            // p(.|s,a')
                    1.0, 0.0,            // p(.|s',a)
                    0.0, 1.0});          // p(.|s',a')
  StationaryMdp m2(2, 2, rewards,
                   {1.0, 0.0,
                    1.0 - leave, leave,
                    0.0, 1.0,
                    1.0, 0.0});
  StationaryMdp mixture(2, 2, rewards,
                        {1.0, 0.0,
                         1.0, 0.0,
                         0.0, 1.0,
                         0.0, 1.0});
  return {std::move(m1), std::move(m2), std::move(mixture)};
}

}  // namespace vucrl
