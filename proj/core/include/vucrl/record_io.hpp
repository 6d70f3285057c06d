#pragma once

#include <iosfwd>
#include <string>

#include "vucrl/learner.hpp"
#include "vucrl/oracle.hpp"

namespace vucrl {

/// Row-per-step tab-separated text: a '#' header block (config, seed,
/// episode and phase metadata), one column-name line, then
/// t, state, action, reward, episode, phase.
void write_run_record(std::ostream& out, const RunRecord& record);
std::string run_record_to_text(const RunRecord& record);

/// Reads back what write_run_record produced. Policies are not persisted
/// and come back empty; everything else round-trips exactly.
RunRecord read_run_record(std::istream& in);
RunRecord run_record_from_text(const std::string& text);

/// Key-value text: v_star_T, realized_reward, regret, alt_regret and one
/// line per bound check.
void write_regret_report(std::ostream& out, const RegretReport& report);

/// Two-column (t, regret) table for plotting.
void write_regret_curve(std::ostream& out, const RegretReport& report);

}  // namespace vucrl
