#include "lsim/runner.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

namespace lsim {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

ScenarioConfig Tiny(CcMechanism cc) {
  ScenarioConfig c;
  c.name = "tiny";
  c.half_radix = 2;
  c.stages = 2;
  c.SetCc(cc);
  c.flows = {FlowSpec{0, 0, 3, 12'500'000'000, SimTime::Zero(), SimTime::FromUs(40),
                      TrafficMode::kOpenLoop},
             FlowSpec{1, 1, 3, 12'500'000'000, SimTime::Zero(), SimTime::FromUs(40),
                      TrafficMode::kOpenLoop}};
  return c;
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class RunnerTest : public ::testing::Test {
 protected:
  void SetUp() override {
    root_ = fs::temp_directory_path() /
            ("lsim_runner_" + std::string(::testing::UnitTest::GetInstance()
                                              ->current_test_info()
                                              ->name()));
    fs::remove_all(root_);
  }
  void TearDown() override { fs::remove_all(root_); }
  fs::path root_;
};

TEST_F(RunnerTest, DrainedRunWritesReportAndMeta) {
  const RunOutcome out = RunScenario(Tiny(CcMechanism::kDcqcn), root_);
  EXPECT_EQ(out.status, ExitStatus::kDrained) << out.message;
  const json meta = json::parse(Slurp(root_ / "run.json"));
  EXPECT_EQ(meta["cc"], "dcqcn");
  EXPECT_EQ(meta["truncated"], false);
  EXPECT_TRUE(meta["error"].is_null());
  EXPECT_GT(meta["engine"]["events_processed"].get<int>(), 0);
  EXPECT_EQ(ParseScenarioText(Slurp(root_ / "run.json")), Tiny(CcMechanism::kDcqcn));
}

TEST_F(RunnerTest, BoundedRunIsNotDrained) {
  ScenarioConfig c = Tiny(CcMechanism::kPfcOnly);
  c.run_bound = SimTime::FromUs(10);
  const RunOutcome out = RunScenario(c, root_);
  EXPECT_EQ(out.status, ExitStatus::kNotDrained);
  EXPECT_EQ(json::parse(Slurp(root_ / "run.json"))["truncated"], true);
}

TEST_F(RunnerTest, FatalRunReportsError) {
  ScenarioConfig c = Tiny(CcMechanism::kPfcOnly);
  c.pfc.enabled = false;
  c.buffer.input_limit_bytes = 4096;
  const RunOutcome out = RunScenario(c, root_);
  EXPECT_EQ(out.status, ExitStatus::kFatal);
  EXPECT_EQ(json::parse(Slurp(root_ / "run.json"))["error"]["code"], "BufferOverflow");
}

TEST_F(RunnerTest, InvalidConfigIsValidationStatus) {
  ScenarioConfig c = Tiny(CcMechanism::kPfcOnly);
  c.flows[0].dst = 0;
  EXPECT_EQ(RunScenario(c, root_).status, ExitStatus::kValidation);
}

TEST_F(RunnerTest, SweepContinuesPastFailingVariant) {
  std::vector<SweepVariant> variants = CanonicalCcSweep();
  variants.push_back({"broken", json{{"pfc", {{"xon_bytes", 1 << 30}}}}});
  const auto entries = Sweep(ScenarioToJson(Tiny(CcMechanism::kPfcOnly)), variants, root_, 2);
  ASSERT_EQ(entries.size(), 4u);
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(entries[i].status, ExitStatus::kDrained) << entries[i].name;
    EXPECT_TRUE(fs::exists(root_ / entries[i].name / "summary.csv"));
  }
  EXPECT_EQ(entries[0].name, "pfc");
  EXPECT_EQ(entries[2].name, "dcqcn-rev");
  EXPECT_EQ(entries[3].status, ExitStatus::kValidation);
  const json meta = json::parse(Slurp(root_ / "dcqcn-rev" / "run.json"));
  EXPECT_EQ(meta["scenario"]["marking"]["kind"], "ecp");
}

TEST_F(RunnerTest, SweepIsIndependentOfJobCount) {
  const json base = ScenarioToJson(Tiny(CcMechanism::kPfcOnly));
  Sweep(base, CanonicalCcSweep(), root_ / "serial", 1);
  Sweep(base, CanonicalCcSweep(), root_ / "parallel", 3);
  for (const char* v : {"pfc", "dcqcn", "dcqcn-rev"}) {
    for (const char* f : {"deliveries.csv", "summary.csv", "run.json"}) {
      EXPECT_EQ(Slurp(root_ / "serial" / v / f), Slurp(root_ / "parallel" / v / f))
          << v << "/" << f;
    }
  }
}

#ifdef LSIM_SIM_BINARY
int Sim(const std::string& args) {
  const std::string cmd = std::string(LSIM_SIM_BINARY) + " " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

TEST_F(RunnerTest, CliExitCodes) {
  fs::create_directories(root_);
  const fs::path tiny = root_ / "tiny.json";
  std::ofstream(tiny) << ScenarioToJson(Tiny(CcMechanism::kDcqcnRev)).dump(2);
  EXPECT_EQ(Sim("validate --scenario " + tiny.string()), 0);
  EXPECT_EQ(Sim("run --scenario " + tiny.string() + " --cc pfc --out " + (root_ / "a").string()), 0);
  EXPECT_TRUE(fs::exists(root_ / "a" / "deliveries.csv"));
  EXPECT_EQ(Sim("run --scenario " + tiny.string() + " --until-ms 0.005 --out " +
                (root_ / "b").string()),
            4);
  EXPECT_EQ(Sim("run --scenario " + tiny.string() + " --cc swift"), 2);
  EXPECT_EQ(Sim("run --scenario /nonexistent.json"), 2);
  EXPECT_EQ(Sim("frobnicate"), 2);

  json bad = ScenarioToJson(Tiny(CcMechanism::kPfcOnly));
  bad["pfc"]["enabled"] = false;
  bad["buffer"]["input_limit_bytes"] = 4096;
  const fs::path overflow = root_ / "overflow.json";
  std::ofstream(overflow) << bad.dump();
  EXPECT_EQ(Sim("run --scenario " + overflow.string() + " --out " + (root_ / "c").string()), 3);

  EXPECT_EQ(Sim("sweep --scenario " + tiny.string() + " --seeds 1,2 --cc pfc,dcqcn --jobs 2 "
                "--out-root " + (root_ / "sweep").string()),
            0);
  EXPECT_TRUE(fs::exists(root_ / "sweep" / "dcqcn" / "seed2" / "run.json"));
}
#endif

}  // namespace
}  // namespace lsim
