#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "vucrl/errors.hpp"
#include "vucrl/harness.hpp"
#include "vucrl/record_io.hpp"

namespace vucrl {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

std::size_t data_rows(const std::string& table) {
  std::size_t rows = 0;
  std::istringstream in(table);
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header) {
      header = true;
      continue;
    }
    ++rows;
  }
  return rows;
}

class HarnessTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("vucrl-harness-" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  ExperimentSpec small_spec() const {
    ExperimentSpec spec;
    spec.environment.n_states = 3;
    spec.environment.n_actions = 2;
    spec.horizon = 600;
    spec.seeds = {1, 2, 3};
    spec.out_dir = dir_.string();
    return spec;
  }

  fs::path dir_;
};

TEST_F(HarnessTest, ConfigParsing) {
  const auto spec = experiment_spec_from_json(R"({
    "environment": {"generator": "gradual", "states": 3, "actions": 2, "budget": 0.4},
    "mode": "count-restart", "delta": 0.1, "horizon": 500, "seeds": [4, 5],
    "evi_epsilon": 0.01, "workers": 2,
    "grid": {"mode": ["no-restart", "variation-restart"], "budget": [0.1, 0.2]}
  })");
  EXPECT_EQ(spec.environment.generator, "gradual");
  EXPECT_EQ(spec.learner.mode, LearnerMode::count_restart);
  EXPECT_EQ(spec.learner.delta, 0.1);
  EXPECT_EQ(spec.learner.evi_epsilon.fixed, std::optional<double>(0.01));
  EXPECT_EQ(spec.seeds, (std::vector<std::uint64_t>{4, 5}));
  EXPECT_EQ(spec.grid.mode->size(), 2u);
  EXPECT_NO_THROW(spec.validate());
  EXPECT_THROW(experiment_spec_from_json(R"({"horizn": 5})"), FormatError);
  EXPECT_THROW(experiment_spec_from_json(R"({"horizon": "five"})"), FormatError);
}

TEST_F(HarnessTest, ValidationRejectsInconsistentSpecs) {
  auto spec = small_spec();
  spec.seeds = {1, 1};
  EXPECT_THROW(spec.validate(), std::invalid_argument);
  spec = small_spec();
  spec.environment.generator = "file";
  spec.environment.path = (dir_ / "missing.json").string();
  EXPECT_THROW(spec.validate(), std::invalid_argument);
  spec = small_spec();
  spec.grid.budget = std::vector<double>{};
  EXPECT_THROW(spec.validate(), std::invalid_argument);
  std::ostringstream log;
  EXPECT_THROW(cli_sweep(spec, log), std::invalid_argument);
}

TEST_F(HarnessTest, RunWritesArtifactsPerSeed) {
  auto spec = small_spec();
  spec.learner.mode = LearnerMode::variation_restart;
  spec.learner.known_variation = true;
  std::ostringstream log;
  ASSERT_EQ(cli_run(spec, log), 0) << log.str();
  for (auto seed : spec.seeds) {
    const std::string prefix = "seed-" + std::to_string(seed);
    EXPECT_TRUE(fs::exists(dir_ / (prefix + ".record.tsv")));
    EXPECT_TRUE(fs::exists(dir_ / (prefix + ".report.tsv")));
    EXPECT_TRUE(fs::exists(dir_ / (prefix + ".curve.tsv")));
    EXPECT_TRUE(fs::exists(dir_ / (prefix + ".env.json")));
  }
  const auto summary = slurp(dir_ / "summary.tsv");
  EXPECT_EQ(data_rows(summary), 3u);
  EXPECT_NE(summary.find("variation-restart-bound"), std::string::npos);
  EXPECT_NE(summary.find("phases"), std::string::npos);
}

TEST_F(HarnessTest, RunIsByteDeterministic) {
  auto spec = small_spec();
  std::ostringstream log;
  ASSERT_EQ(cli_run(spec, log), 0);
  const auto first_summary = slurp(dir_ / "summary.tsv");
  const auto first_record = slurp(dir_ / "seed-2.record.tsv");
  spec.workers = 3;
  ASSERT_EQ(cli_run(spec, log), 0);
  EXPECT_EQ(slurp(dir_ / "summary.tsv"), first_summary);
  EXPECT_EQ(slurp(dir_ / "seed-2.record.tsv"), first_record);
}

TEST_F(HarnessTest, SummaryRegretMatchesPersistedFiles) {
  auto spec = small_spec();
  spec.seeds = {7};
  std::ostringstream log;
  ASSERT_EQ(cli_run(spec, log), 0);
  const auto env = nonstationary_mdp_from_json(slurp(dir_ / "seed-7.env.json"));
  const auto record = run_record_from_text(slurp(dir_ / "seed-7.record.tsv"));
  const auto report = evaluate_regret(record, env);
  std::istringstream summary(slurp(dir_ / "summary.tsv"));
  std::string line;
  std::string last;
  while (std::getline(summary, line)) last = line;
  std::istringstream fields(last);
  std::string seed, mode, horizon, v_r, v_p, regret;
  fields >> seed >> mode >> horizon >> v_r >> v_p >> regret;
  EXPECT_EQ(std::stod(regret), report.regret);
}

TEST_F(HarnessTest, FileEnvironmentAndFailureMarker) {
  fs::create_directories(dir_);
  const auto env = make_abrupt(3, 3, 2, 300, 2, 0.2);
  const auto path = dir_ / "env.json";
  std::ofstream(path) << to_json(env);
  auto spec = small_spec();
  spec.out_dir = (dir_ / "out").string();
  spec.environment.generator = "file";
  spec.environment.path = path.string();
  spec.seeds = {1};
  std::ostringstream log;
  spec.horizon = 300;
  EXPECT_EQ(cli_run(spec, log), 0);
  spec.horizon = 400;
  EXPECT_EQ(cli_run(spec, log), 1);
  EXPECT_TRUE(fs::exists(dir_ / "out" / "seed-1.failed"));
  EXPECT_NE(slurp(dir_ / "out" / "summary.tsv").find("failed"), std::string::npos);
}

TEST_F(HarnessTest, SweepProducesLongTable) {
  auto spec = small_spec();
  spec.environment.generator = "gradual";
  spec.seeds = {1, 2, 3, 4, 5};
  spec.grid.mode = std::vector<LearnerMode>{LearnerMode::variation_restart, LearnerMode::count_restart};
  spec.grid.budget = std::vector<double>{0.2, 0.6};
  spec.learner.known_variation = true;
  std::ostringstream log;
  ASSERT_EQ(cli_sweep(spec, log), 0) << log.str();
  const auto table = slurp(dir_ / "sweep.tsv");
  EXPECT_EQ(data_rows(table), 20u);
  // Count-restart derives L from the changed steps: every step of a blend.
  EXPECT_NE(table.find("count-restart\t1\t"), std::string::npos);
  EXPECT_NE(table.find("\t599\t"), std::string::npos);
}

TEST_F(HarnessTest, SeedsSplitIntoIndependentStreams) {
  EXPECT_NE(environment_seed(1), trajectory_seed(1));
  EXPECT_NE(environment_seed(1), environment_seed(2));
  EXPECT_EQ(environment_seed(9), environment_seed(9));
}

TEST(Verify, FastLevelPasses) {
  std::ostringstream out;
  EXPECT_EQ(cli_verify(VerifyLevel::fast, out), 0) << out.str();
  EXPECT_NE(out.str().find("PASS mixture-fixture"), std::string::npos);
  EXPECT_NE(out.str().find("mixture diameter infinite"), std::string::npos);
  EXPECT_EQ(out.str().find("optimism-coverage"), std::string::npos);
  EXPECT_THROW(verify_level_from_string("medium"), std::invalid_argument);
}

}  // namespace
}  // namespace vucrl
