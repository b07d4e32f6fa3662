#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lsim/scenario.hpp"
#include "lsim/simulation.hpp"

namespace lsim {

// Process exit codes of the sim tool.
enum class ExitStatus : int {
  kDrained = 0,
  kValidation = 2,
  kFatal = 3,
  kNotDrained = 4,
};

struct RunOutcome {
  ExitStatus status = ExitStatus::kDrained;
  std::string message;
  RunResult result;
};

// Scenario echo plus engine statistics for run.json.
nlohmann::json RunMeta(const ScenarioConfig& config, const RunResult& result);

// Runs one scenario and writes its report into out_dir.
RunOutcome RunScenario(const ScenarioConfig& config,
                       const std::filesystem::path& out_dir);

struct SweepVariant {
  std::string name;
  nlohmann::json patch;  // JSON merge patch over the base scenario
};

struct SweepEntry {
  std::string name;
  ExitStatus status = ExitStatus::kDrained;
  std::string message;
};

// One variant per congestion-control mechanism.
std::vector<SweepVariant> CanonicalCcSweep();

// Runs every variant into out_root/<name>/. A failing variant is recorded and
// the rest continue. Up to `jobs` runs execute concurrently.
std::vector<SweepEntry> Sweep(const nlohmann::json& base,
                              const std::vector<SweepVariant>& variants,
                              const std::filesystem::path& out_root,
                              int jobs = 1);

}  // namespace lsim
