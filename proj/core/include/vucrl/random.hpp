#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace vucrl {

/// Seeded generator with platform-independent draws.
///
/// The standard distributions are implementation-defined, so every draw is
/// derived directly from the raw 64-bit engine output. Identical seeds and
/// call sequences reproduce identical values on every conforming toolchain.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1) with 53 bits of resolution.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer on [0, n). Requires n > 0.
  std::size_t index(std::size_t n);

  /// Exponential(1) draw; normalized blocks of these are Dirichlet(1) rows.
  double exponential();

 private:
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer over (root, stream): independent child seeds.
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream);

}  // namespace vucrl
