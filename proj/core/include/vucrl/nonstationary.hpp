#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vucrl/mdp.hpp"

namespace vucrl {

enum class Interpolation { piecewise_constant, linear_blend };

std::string_view to_string(Interpolation mode);
Interpolation interpolation_from_string(std::string_view name);

/// The MDP in force from `start_step` on (1-based).
struct Breakpoint {
  std::size_t start_step = 1;
  StationaryMdp mdp;
};

/// Generator name, seed and parameters, carried in the serialized header.
struct Provenance {
  std::string generator;
  std::uint64_t seed = 0;
  std::map<std::string, double> parameters;
};

/// Number of interior blend points per linear segment checked for communication.
inline constexpr std::size_t kBlendCheckPoints = 8;

/// A time-indexed environment M_1..M_T stored as breakpoints plus an
/// interpolation rule.
///
/// Construction validates that breakpoints start at step 1, increase strictly
/// and stay within the horizon, and that every breakpoint (and, for linear
/// blends, kBlendCheckPoints evenly spaced interior points per segment) is
/// communicating. Non-communicating environments are rejected with
/// std::invalid_argument.
class NonstationaryMdp {
 public:
  NonstationaryMdp(std::size_t horizon, std::vector<Breakpoint> breakpoints,
                   Interpolation interpolation, StateIndex initial_state,
                   Provenance provenance = {});

  std::size_t horizon() const noexcept { return horizon_; }
  StateIndex initial_state() const noexcept { return initial_state_; }
  Interpolation interpolation() const noexcept { return interpolation_; }
  const std::vector<Breakpoint>& breakpoints() const noexcept { return breakpoints_; }
  const Provenance& provenance() const noexcept { return provenance_; }
  std::size_t n_states() const noexcept { return breakpoints_.front().mdp.n_states(); }
  std::size_t n_actions() const noexcept { return breakpoints_.front().mdp.n_actions(); }

  /// Largest diameter among the snapshots checked at construction.
  double checked_diameter_max() const noexcept { return checked_diameter_max_; }

  /// M_t for 1 <= t <= horizon; throws std::out_of_range otherwise.
  StationaryMdp snapshot(std::size_t t) const;

  /// Index of the breakpoint whose segment contains step t.
  std::size_t segment_of(std::size_t t) const;

  /// Number of distinct snapshots: the breakpoint count for piecewise-constant
  /// schedules, every step for linear blends with more than one breakpoint.
  std::size_t distinct_snapshot_count() const;

 private:
  std::size_t horizon_;
  std::vector<Breakpoint> breakpoints_;
  Interpolation interpolation_;
  StateIndex initial_state_;
  Provenance provenance_;
  double checked_diameter_max_ = 0.0;
};

/// Largest number of stationary solves the optional global-variation and
/// theorem checks will perform.
inline constexpr std::size_t kGlobalVariationCap = 10'000;

struct VariationSummary {
  double v_r = 0.0;
  double v_p = 0.0;
  std::optional<double> v_global;
  /// Entry t-1 holds the change between steps t and t+1.
  std::vector<double> per_step_r;
  std::vector<double> per_step_p;
  /// Upper bound D on the snapshot diameters.
  double d_max = 0.0;
};

/// Local variation terms and, optionally, the global variation of optimal
/// gains. With `include_global`, d_max covers every distinct snapshot;
/// otherwise it is the construction-time checked maximum. Throws
/// SizeLimitError when the global term would need more than
/// kGlobalVariationCap stationary solves.
VariationSummary variation(const NonstationaryMdp& env, bool include_global);

/// Sum of per-step reward / transition changes over steps [first, last).
/// Steps are 1-based; the pair (t, t+1) contributes for first <= t < last.
double reward_variation_between(const VariationSummary& summary, std::size_t first,
                                std::size_t last);
double transition_variation_between(const VariationSummary& summary, std::size_t first,
                                    std::size_t last);

struct GlobalVariationCheck {
  bool holds = false;
  double v_global = 0.0;
  /// v_r + d_max * v_p.
  double bound = 0.0;
};

/// Checks that the global gain variation is dominated by the local terms,
/// v_global <= v_r + D * v_p (+1e-6). Requires horizon <= kGlobalVariationCap.
GlobalVariationCheck check_global_variation_bound(const NonstationaryMdp& env);

/// Piecewise-constant environment with `n_changes` evenly spaced abrupt
/// changes. Each change perturbs rewards by at most `change_magnitude` in
/// sup-norm and each transition row by at most `change_magnitude` in L1.
NonstationaryMdp make_abrupt(std::uint64_t seed, std::size_t n_states, std::size_t n_actions,
                             std::size_t horizon, std::size_t n_changes,
                             double change_magnitude);

/// Linear-blend environment whose measured v_r + v_p lies in
/// [0.9 * budget, budget], with every step changing when budget > 0.
NonstationaryMdp make_gradual(std::uint64_t seed, std::size_t n_states, std::size_t n_actions,
                              std::size_t horizon, double total_variation_budget);

/// Two 2-state, 2-action MDPs with diameter `d` whose per-pair mixture
/// disconnects the states. State 0/1 and action 0/1 play s/s' and a/a'.
struct MixtureDiameterFixture {
  StationaryMdp m1;
  StationaryMdp m2;
  StationaryMdp mixture;
};
MixtureDiameterFixture mixture_diameter_fixture(double d);

/// JSON environment document (header with provenance, then breakpoints that
/// embed the StationaryMdp format).
std::string to_json(const NonstationaryMdp& env);
NonstationaryMdp nonstationary_mdp_from_json(std::string_view text);

}  // namespace vucrl
