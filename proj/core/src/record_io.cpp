#include "vucrl/record_io.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "text_format.hpp"
#include "vucrl/errors.hpp"

namespace vucrl {

namespace {

constexpr const char* kRecordFormat = "vucrl-run-record";
constexpr int kRecordVersion = 1;

std::string exact(double value) { return exact_text(value); }

double parse_double(const std::string& text) {
  double value = 0.0;
  const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
  if (result.ec != std::errc() || result.ptr != text.data() + text.size()) {
    throw FormatError("bad number '" + text + "'");
  }
  return value;
}

std::uint64_t parse_unsigned(const std::string& text) {
  std::uint64_t value = 0;
  const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
  if (result.ec != std::errc() || result.ptr != text.data() + text.size()) {
    throw FormatError("bad integer '" + text + "'");
  }
  return value;
}

template <typename T, typename F>
std::string join(const std::vector<T>& values, F&& format) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += format(values[i]);
  }
  return out;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  if (text.empty()) return parts;
  std::string part;
  std::istringstream in(text);
  while (std::getline(in, part, sep)) parts.push_back(part);
  return parts;
}

}  // namespace

void write_run_record(std::ostream& out, const RunRecord& record) {
  const auto& c = record.config;
  const auto count = [](std::size_t v) { return std::to_string(v); };
  out << "# format " << kRecordFormat << '\n';
  out << "# version " << kRecordVersion << '\n';
  out << "# seed " << record.seed << '\n';
  out << "# states " << record.n_states << '\n';
  out << "# actions " << record.n_actions << '\n';
  out << "# mode " << to_string(c.mode) << '\n';
  out << "# delta " << exact(c.delta) << '\n';
  out << "# v_tilde_r " << exact(c.v_tilde_r) << '\n';
  out << "# v_tilde_p " << exact(c.v_tilde_p) << '\n';
  out << "# l_changes " << (c.l_changes ? std::to_string(*c.l_changes) : "none") << '\n';
  out << "# evi_epsilon " << (c.evi_epsilon.fixed ? exact(*c.evi_epsilon.fixed) : "one-over-sqrt-tk")
      << '\n';
  out << "# known_variation " << (c.known_variation ? 1 : 0) << '\n';
  out << "# episode_starts " << join(record.episode_starts, count) << '\n';
  out << "# phase_starts " << join(record.phase_starts, count) << '\n';
  out << "# optimistic_gains " << join(record.optimistic_gains, exact) << '\n';
  for (const auto& p : record.phases) {
    out << "# phase " << p.start << ' ' << p.length << ' ' << exact(p.delta) << ' '
        << exact(p.v_tilde_r) << ' ' << exact(p.v_tilde_p) << ' ' << p.episodes << ' '
        << exact(p.visit_ratio_sum) << '\n';
  }
  out << "t\tstate\taction\treward\tepisode\tphase\n";
  for (const auto& s : record.steps) {
    out << s.t << '\t' << s.state << '\t' << s.action << '\t' << exact(s.reward) << '\t'
        << s.episode << '\t' << s.phase << '\n';
  }
}

std::string run_record_to_text(const RunRecord& record) {
  std::ostringstream out;
  write_run_record(out, record);
  return out.str();
}

RunRecord read_run_record(std::istream& in) {
  RunRecord record;
  auto& c = record.config;
  std::string line;
  bool columns_seen = false;
  bool format_seen = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.front() == '#') {
      std::istringstream fields(line.substr(1));
      std::string key;
      std::string value;
      fields >> key;
      std::getline(fields >> std::ws, value);
      if (key == "format") {
        if (value != kRecordFormat) throw FormatError("not a run record: '" + value + "'");
        format_seen = true;
      } else if (key == "version") {
        if (parse_unsigned(value) != kRecordVersion) {
          throw FormatError("unsupported run record version " + value);
        }
      } else if (key == "seed") {
        record.seed = parse_unsigned(value);
      } else if (key == "states") {
        record.n_states = parse_unsigned(value);
      } else if (key == "actions") {
        record.n_actions = parse_unsigned(value);
      } else if (key == "mode") {
        c.mode = learner_mode_from_string(value);
      } else if (key == "delta") {
        c.delta = parse_double(value);
      } else if (key == "v_tilde_r") {
        c.v_tilde_r = parse_double(value);
      } else if (key == "v_tilde_p") {
        c.v_tilde_p = parse_double(value);
      } else if (key == "l_changes") {
        if (value != "none") c.l_changes = parse_unsigned(value);
      } else if (key == "evi_epsilon") {
        if (value != "one-over-sqrt-tk") c.evi_epsilon.fixed = parse_double(value);
      } else if (key == "known_variation") {
        c.known_variation = parse_unsigned(value) != 0;
      } else if (key == "episode_starts") {
        for (const auto& v : split(value, ',')) record.episode_starts.push_back(parse_unsigned(v));
      } else if (key == "phase_starts") {
        for (const auto& v : split(value, ',')) record.phase_starts.push_back(parse_unsigned(v));
      } else if (key == "optimistic_gains") {
        for (const auto& v : split(value, ',')) record.optimistic_gains.push_back(parse_double(v));
      } else if (key == "phase") {
        const auto parts = split(value, ' ');
        if (parts.size() != 7) throw FormatError("phase line needs 7 fields");
        record.phases.push_back({parse_unsigned(parts[0]), parse_unsigned(parts[1]),
                                 parse_double(parts[2]), parse_double(parts[3]),
                                 parse_double(parts[4]), parse_unsigned(parts[5]),
                                 parse_double(parts[6])});
      }
      // Unknown header keys (e.g. timestamps) are ignored.
      continue;
    }
    if (!columns_seen) {
      if (line != "t\tstate\taction\treward\tepisode\tphase") {
        throw FormatError("unexpected column line '" + line + "'");
      }
      columns_seen = true;
      continue;
    }
    const auto parts = split(line, '\t');
    if (parts.size() != 6) throw FormatError("step row needs 6 columns: '" + line + "'");
    record.steps.push_back({parse_unsigned(parts[0]), parse_unsigned(parts[1]),
                            parse_unsigned(parts[2]), parse_double(parts[3]),
                            parse_unsigned(parts[4]), parse_unsigned(parts[5])});
  }
  if (!format_seen || !columns_seen) throw FormatError("incomplete run record");
  return record;
}

RunRecord run_record_from_text(const std::string& text) {
  std::istringstream in(text);
  return read_run_record(in);
}

void write_regret_report(std::ostream& out, const RegretReport& report) {
  out << "# format vucrl-regret-report\n";
  out << "key\tvalue\tsatisfied\n";
  out << "v_star_T\t" << exact(report.v_star_T) << "\t-\n";
  out << "realized_reward\t" << exact(report.realized_reward) << "\t-\n";
  out << "regret\t" << exact(report.regret) << "\t-\n";
  if (report.alt_regret) out << "alt_regret\t" << exact(*report.alt_regret) << "\t-\n";
  for (const auto& check : report.bound_checks) {
    out << check.name << '\t' << exact(check.value) << '\t' << (check.satisfied ? "yes" : "no")
        << '\n';
  }
}

void write_regret_curve(std::ostream& out, const RegretReport& report) {
  out << "t\tregret\n";
  for (std::size_t i = 0; i < report.regret_curve.size(); ++i) {
    out << i + 1 << '\t' << exact(report.regret_curve[i]) << '\n';
  }
}

}  // namespace vucrl
