#include "vucrl/nonstationary.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "vucrl/errors.hpp"

namespace vucrl {

namespace {

constexpr double kGlobalBoundTolerance = 1e-6;

double max_reward_change(const StationaryMdp& lhs, const StationaryMdp& rhs) {
  double worst = 0.0;
  for (std::size_t i = 0; i < lhs.rewards().size(); ++i) {
    worst = std::max(worst, std::abs(lhs.rewards()[i] - rhs.rewards()[i]));
  }
  return worst;
}

double max_row_change(const StationaryMdp& lhs, const StationaryMdp& rhs) {
  double worst = 0.0;
  for (StateIndex s = 0; s < lhs.n_states(); ++s) {
    for (ActionIndex a = 0; a < lhs.n_actions(); ++a) {
      worst = std::max(worst, l1_distance(lhs.row(s, a), rhs.row(s, a)));
    }
  }
  return worst;
}

double checked_diameter(const StationaryMdp& mdp, std::size_t step) {
  const double d = diameter(mdp);
  if (d == kInfiniteDiameter) {
    throw std::invalid_argument("environment snapshot at step " + std::to_string(step) +
                                " is not communicating");
  }
  return d;
}

double sum_range(const std::vector<double>& per_step, std::size_t first, std::size_t last) {
  if (first < 1 || first > last || last > per_step.size() + 1) {
    throw std::out_of_range("variation range outside the horizon");
  }
  double total = 0.0;
  for (std::size_t t = first; t < last; ++t) total += per_step[t - 1];
  return total;
}

}  // namespace

std::string_view to_string(Interpolation mode) {
  return mode == Interpolation::piecewise_constant ? "piecewise-constant" : "linear-blend";
}

Interpolation interpolation_from_string(std::string_view name) {
  if (name == "piecewise-constant") return Interpolation::piecewise_constant;
  if (name == "linear-blend") return Interpolation::linear_blend;
  throw std::invalid_argument("unknown interpolation mode '" + std::string(name) + "'");
}

NonstationaryMdp::NonstationaryMdp(std::size_t horizon, std::vector<Breakpoint> breakpoints,
                                   Interpolation interpolation, StateIndex initial_state,
                                   Provenance provenance)
    : horizon_(horizon),
      breakpoints_(std::move(breakpoints)),
      interpolation_(interpolation),
      initial_state_(initial_state),
      provenance_(std::move(provenance)) {
  if (horizon_ == 0) throw std::invalid_argument("environment horizon must be positive");
  if (breakpoints_.empty()) throw std::invalid_argument("environment needs at least one breakpoint");
  if (breakpoints_.front().start_step != 1) {
    throw std::invalid_argument("the first breakpoint must start at step 1");
  }
  const std::size_t n_states = breakpoints_.front().mdp.n_states();
  const std::size_t n_actions = breakpoints_.front().mdp.n_actions();
  for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
    const auto& bp = breakpoints_[i];
    if (i > 0 && bp.start_step <= breakpoints_[i - 1].start_step) {
      throw std::invalid_argument("breakpoints must be strictly increasing");
    }
    if (bp.start_step > horizon_) throw std::invalid_argument("breakpoint beyond the horizon");
    if (bp.mdp.n_states() != n_states || bp.mdp.n_actions() != n_actions) {
      throw std::invalid_argument("breakpoint MDPs must share state and action spaces");
    }
  }
  if (initial_state_ >= n_states) throw std::invalid_argument("initial state out of range");

  for (const auto& bp : breakpoints_) {
    checked_diameter_max_ = std::max(checked_diameter_max_, checked_diameter(bp.mdp, bp.start_step));
  }
  if (interpolation_ == Interpolation::linear_blend) {
    for (std::size_t i = 0; i + 1 < breakpoints_.size(); ++i) {
      for (std::size_t k = 1; k <= kBlendCheckPoints; ++k) {
        const double weight = static_cast<double>(k) / static_cast<double>(kBlendCheckPoints + 1);
        const auto mixed = blend(breakpoints_[i].mdp, breakpoints_[i + 1].mdp, weight);
        checked_diameter_max_ =
            std::max(checked_diameter_max_, checked_diameter(mixed, breakpoints_[i].start_step));
      }
    }
  }
}

std::size_t NonstationaryMdp::segment_of(std::size_t t) const {
  if (t < 1 || t > horizon_) {
    throw std::out_of_range("step " + std::to_string(t) + " outside [1, " +
                            std::to_string(horizon_) + "]");
  }
  const auto it = std::upper_bound(
      breakpoints_.begin(), breakpoints_.end(), t,
      [](std::size_t step, const Breakpoint& bp) { return step < bp.start_step; });
  return static_cast<std::size_t>(std::distance(breakpoints_.begin(), it)) - 1;
}

StationaryMdp NonstationaryMdp::snapshot(std::size_t t) const {
  const std::size_t seg = segment_of(t);
  if (interpolation_ == Interpolation::piecewise_constant || seg + 1 == breakpoints_.size()) {
    return breakpoints_[seg].mdp;
  }
  const auto& lo = breakpoints_[seg];
  const auto& hi = breakpoints_[seg + 1];
  const double weight = static_cast<double>(t - lo.start_step) /
                        static_cast<double>(hi.start_step - lo.start_step);
  return blend(lo.mdp, hi.mdp, weight);
}

std::size_t NonstationaryMdp::distinct_snapshot_count() const {
  if (interpolation_ == Interpolation::piecewise_constant || breakpoints_.size() == 1) {
    return breakpoints_.size();
  }
  return horizon_;
}

VariationSummary variation(const NonstationaryMdp& env, bool include_global) {
  const std::size_t horizon = env.horizon();
  if (include_global && env.distinct_snapshot_count() > kGlobalVariationCap) {
    throw SizeLimitError("global variation needs " +
                         std::to_string(env.distinct_snapshot_count()) +
                         " stationary solves; refusing above " +
                         std::to_string(kGlobalVariationCap));
  }

  VariationSummary out;
  out.per_step_r.assign(horizon - 1, 0.0);
  out.per_step_p.assign(horizon - 1, 0.0);
  const bool piecewise = env.interpolation() == Interpolation::piecewise_constant;

  if (piecewise) {
    const auto& bps = env.breakpoints();
    for (std::size_t i = 1; i < bps.size(); ++i) {
      const std::size_t t = bps[i].start_step - 1;  // change between t and t+1
      out.per_step_r[t - 1] = max_reward_change(bps[i - 1].mdp, bps[i].mdp);
      out.per_step_p[t - 1] = max_row_change(bps[i - 1].mdp, bps[i].mdp);
    }
  } else if (env.breakpoints().size() > 1) {
    StationaryMdp previous = env.snapshot(1);
    for (std::size_t t = 1; t < horizon; ++t) {
      StationaryMdp current = env.snapshot(t + 1);
      out.per_step_r[t - 1] = max_reward_change(previous, current);
      out.per_step_p[t - 1] = max_row_change(previous, current);
      previous = std::move(current);
    }
  }
  out.v_r = std::accumulate(out.per_step_r.begin(), out.per_step_r.end(), 0.0);
  out.v_p = std::accumulate(out.per_step_p.begin(), out.per_step_p.end(), 0.0);
  out.d_max = env.checked_diameter_max();

  if (include_global) {
    std::vector<double> gains;
    if (piecewise || env.breakpoints().size() == 1) {
      std::vector<double> segment_gain;
      for (const auto& bp : env.breakpoints()) {
        segment_gain.push_back(relative_value_iteration(bp.mdp).gain);
      }
      gains.reserve(horizon);
      for (std::size_t t = 1; t <= horizon; ++t) gains.push_back(segment_gain[env.segment_of(t)]);
    } else {
      gains.reserve(horizon);
      for (std::size_t t = 1; t <= horizon; ++t) {
        const auto snap = env.snapshot(t);
        gains.push_back(relative_value_iteration(snap).gain);
        const double d = diameter(snap);
        if (d == kInfiniteDiameter) {
          throw std::invalid_argument("snapshot at step " + std::to_string(t) +
                                      " is not communicating");
        }
        out.d_max = std::max(out.d_max, d);
      }
    }
    double total = 0.0;
    for (std::size_t t = 1; t < horizon; ++t) total += std::abs(gains[t] - gains[t - 1]);
    out.v_global = total;
  }
  return out;
}

double reward_variation_between(const VariationSummary& summary, std::size_t first,
                                std::size_t last) {
  return sum_range(summary.per_step_r, first, last);
}

double transition_variation_between(const VariationSummary& summary, std::size_t first,
                                    std::size_t last) {
  return sum_range(summary.per_step_p, first, last);
}

GlobalVariationCheck check_global_variation_bound(const NonstationaryMdp& env) {
  if (env.horizon() > kGlobalVariationCap) {
    throw SizeLimitError("global variation check requires horizon <= " +
                         std::to_string(kGlobalVariationCap));
  }
  const auto summary = variation(env, true);
  GlobalVariationCheck out;
  out.v_global = *summary.v_global;
  out.bound = summary.v_r + summary.d_max * summary.v_p;
  out.holds = out.v_global <= out.bound + kGlobalBoundTolerance;
  return out;
}

}  // namespace vucrl
