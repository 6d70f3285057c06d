#include <gtest/gtest.h>

#include <sstream>

#include "vucrl/errors.hpp"
#include "vucrl/record_io.hpp"

namespace vucrl {
namespace {

TEST(RunRecordText, RoundTripsEveryField) {
  const auto env = make_gradual(3, 3, 2, 800, 1.0);
  LearnerConfig config;
  config.mode = LearnerMode::variation_restart;
  config.known_variation = true;
  config.evi_epsilon.fixed = 1e-3;
  const auto record = run_learner(env, config, 12345678901234567ULL);
  const auto back = run_record_from_text(run_record_to_text(record));
  EXPECT_EQ(back.seed, record.seed);
  EXPECT_EQ(back.n_states, record.n_states);
  EXPECT_EQ(back.config.mode, record.config.mode);
  EXPECT_EQ(back.config.delta, record.config.delta);
  EXPECT_EQ(back.config.evi_epsilon.fixed, record.config.evi_epsilon.fixed);
  EXPECT_TRUE(back.config.known_variation);
  EXPECT_EQ(back.episode_starts, record.episode_starts);
  EXPECT_EQ(back.phase_starts, record.phase_starts);
  EXPECT_EQ(back.optimistic_gains, record.optimistic_gains);
  ASSERT_EQ(back.phases.size(), record.phases.size());
  for (std::size_t i = 0; i < back.phases.size(); ++i) {
    EXPECT_EQ(back.phases[i].delta, record.phases[i].delta);
    EXPECT_EQ(back.phases[i].v_tilde_p, record.phases[i].v_tilde_p);
    EXPECT_EQ(back.phases[i].visit_ratio_sum, record.phases[i].visit_ratio_sum);
    EXPECT_EQ(back.phases[i].episodes, record.phases[i].episodes);
  }
  ASSERT_EQ(back.steps.size(), record.steps.size());
  for (std::size_t i = 0; i < back.steps.size(); ++i) {
    EXPECT_EQ(back.steps[i].t, record.steps[i].t);
    EXPECT_EQ(back.steps[i].state, record.steps[i].state);
    EXPECT_EQ(back.steps[i].action, record.steps[i].action);
    EXPECT_EQ(back.steps[i].reward, record.steps[i].reward);
    EXPECT_EQ(back.steps[i].episode, record.steps[i].episode);
    EXPECT_EQ(back.steps[i].phase, record.steps[i].phase);
  }
  // Regret re-derived from the persisted record is identical.
  EXPECT_EQ(evaluate_regret(back, env).regret, evaluate_regret(record, env).regret);
}

TEST(RunRecordText, CountRestartKeepsL) {
  const auto env = make_abrupt(3, 2, 2, 100, 1, 0.1);
  LearnerConfig config;
  config.mode = LearnerMode::count_restart;
  config.l_changes = 1;
  const auto back = run_record_from_text(run_record_to_text(run_learner(env, config, 1)));
  EXPECT_EQ(back.config.l_changes, std::optional<std::size_t>(1));
}

TEST(RunRecordText, RejectsMalformedInput) {
  EXPECT_THROW(run_record_from_text("t\tstate\n"), FormatError);
  EXPECT_THROW(run_record_from_text("# format something-else\n"), FormatError);
  EXPECT_THROW(run_record_from_text("# format vucrl-run-record\nt\tstate\taction\treward\tepisode\t"
                                    "phase\n1\t0\t0\tx\t1\t1\n"),
               FormatError);
}

TEST(RegretText, CurveAndReport) {
  RegretReport report;
  report.v_star_T = 3.5;
  report.realized_reward = 2.0;
  report.regret = 1.5;
  report.regret_curve = {0.25, 1.5};
  report.bound_checks.push_back({"no-restart-bound", 100.0, true});
  std::ostringstream curve;
  write_regret_curve(curve, report);
  EXPECT_EQ(curve.str(), "t\tregret\n1\t0.25\n2\t1.5\n");
  std::ostringstream text;
  write_regret_report(text, report);
  EXPECT_NE(text.str().find("regret\t1.5"), std::string::npos);
  EXPECT_NE(text.str().find("no-restart-bound\t100\tyes"), std::string::npos);
}

}  // namespace
}  // namespace vucrl
