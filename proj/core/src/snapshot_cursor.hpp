#pragma once

#include <optional>

#include "vucrl/nonstationary.hpp"

namespace vucrl {

// Sequential snapshot access that reuses the current MDP while the
// environment stays constant between steps.
class SnapshotCursor {
 public:
  explicit SnapshotCursor(const NonstationaryMdp& env) : env_(env) {}

  const StationaryMdp& at(std::size_t t) {
    const std::size_t segment = env_.segment_of(t);
    const bool constant = env_.interpolation() == Interpolation::piecewise_constant ||
                          segment + 1 == env_.breakpoints().size();
    if (!cached_ || !(constant && constant_ && segment == segment_)) {
      cached_.emplace(env_.snapshot(t));
      segment_ = segment;
      constant_ = constant;
    }
    return *cached_;
  }

 private:
  const NonstationaryMdp& env_;
  std::optional<StationaryMdp> cached_;
  std::size_t segment_ = 0;
  bool constant_ = false;
};

}  // namespace vucrl
