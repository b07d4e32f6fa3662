// sim: run, sweep and validate lossless-fabric scenarios.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "lsim/error.hpp"
#include "lsim/runner.hpp"
#include "lsim/scenario.hpp"

namespace {

using lsim::ExitStatus;
using nlohmann::json;

int Code(ExitStatus s) { return static_cast<int>(s); }

int CodeFor(const lsim::Error& e) {
  switch (e.code()) {
    case lsim::ErrorCode::kValidation:
    case lsim::ErrorCode::kParse:
    case lsim::ErrorCode::kIo:
    case lsim::ErrorCode::kInvalidParameter:
    case lsim::ErrorCode::kInvalidHost:
      return Code(ExitStatus::kValidation);
    default:
      return Code(ExitStatus::kFatal);
  }
}

lsim::CcMechanism CcOrThrow(const std::string& name) {
  auto cc = lsim::ParseCc(name);
  if (!cc) {
    throw lsim::Error(lsim::ErrorCode::kValidation,
                      "unknown cc '" + name + "' (pfc, dcqcn, dcqcn-rev)");
  }
  return *cc;
}

struct RunArgs {
  std::string scenario = "paper64";
  std::string cc;
  std::optional<std::uint64_t> seed;
  std::string out = "out";
  std::optional<std::int64_t> bin_ns;
  std::optional<double> until_ms;
  bool audit = false;
};

int DoRun(const RunArgs& a) {
  lsim::ScenarioConfig config = lsim::LoadScenario(a.scenario);
  if (!a.cc.empty()) config.SetCc(CcOrThrow(a.cc));
  if (a.seed) config.seed = *a.seed;
  if (a.bin_ns) config.bin_width = lsim::SimTime::FromNs(*a.bin_ns);
  if (a.until_ms) {
    config.run_bound = lsim::SimTime::FromPs(std::llround(*a.until_ms * 1e9));
  }
  if (a.audit) config.audit = true;
  // Re-validate after overrides.
  config = lsim::ScenarioFromJson(lsim::ScenarioToJson(config));

  const lsim::RunOutcome out = lsim::RunScenario(config, a.out);
  if (out.status == ExitStatus::kDrained) {
    const auto& s = out.result.stats;
    std::cout << config.name << " cc=" << lsim::CcName(config.cc)
              << " seed=" << config.seed << " drained at "
              << lsim::GlobalCompletionTime(out.result.report).ToMs()
              << " ms, " << s.events_processed << " events -> " << a.out
              << "\n";
  } else {
    std::cerr << "sim: " << out.message << "\n";
  }
  return Code(out.status);
}

struct SweepArgs {
  std::string scenario = "paper64";
  std::string out_root = "sweep";
  std::vector<std::string> ccs;
  std::vector<std::uint64_t> seeds;
  std::string overrides;
  int jobs = 1;
};

json ReadJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw lsim::Error(lsim::ErrorCode::kIo, "cannot read " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw lsim::Error(lsim::ErrorCode::kParse, path + ": " + e.what());
  }
}

int DoSweep(const SweepArgs& a) {
  const json base = lsim::ScenarioToJson(lsim::LoadScenario(a.scenario));

  std::vector<lsim::SweepVariant> variants;
  if (!a.overrides.empty()) {
    // {"name": patch, ...}
    const json doc = ReadJsonFile(a.overrides);
    if (!doc.is_object()) {
      throw lsim::Error(lsim::ErrorCode::kParse,
                        a.overrides + ": expected an object of named patches");
    }
    for (const auto& [name, patch] : doc.items()) variants.push_back({name, patch});
  } else if (!a.ccs.empty()) {
    for (const std::string& name : a.ccs) {
      const std::string canon(lsim::CcName(CcOrThrow(name)));
      variants.push_back({canon, json{{"cc", {{"mechanism", canon}}},
                                      {"marking", {{"kind", nullptr}}}}});
    }
  } else {
    variants = lsim::CanonicalCcSweep();
  }
  if (!a.seeds.empty()) {
    std::vector<lsim::SweepVariant> seeded;
    for (const auto& v : variants) {
      for (std::uint64_t seed : a.seeds) {
        json patch = v.patch;
        patch["seed"] = seed;
        seeded.push_back({v.name + "/seed" + std::to_string(seed), patch});
      }
    }
    variants = std::move(seeded);
  }

  const auto entries = lsim::Sweep(base, variants, a.out_root, a.jobs);
  int worst = 0;
  for (const auto& e : entries) {
    std::cout << e.name << ": exit " << Code(e.status);
    if (!e.message.empty()) std::cout << " (" << e.message << ")";
    std::cout << "\n";
    worst = std::max(worst, Code(e.status));
  }
  return worst;
}

int DoValidate(const std::string& scenario) {
  const lsim::ScenarioConfig config = lsim::LoadScenario(scenario);
  std::cout << scenario << ": ok (" << config.flows.size() << " flows, k'="
            << config.half_radix << ", n=" << config.stages << ", cc="
            << lsim::CcName(config.cc) << ")\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Packet-level simulator for lossless CLOS fabrics"};
  app.require_subcommand(1);

  RunArgs run;
  CLI::App* run_cmd = app.add_subcommand("run", "Run one scenario");
  run_cmd->add_option("--scenario", run.scenario, "Preset name or JSON file")
      ->capture_default_str();
  run_cmd->add_option("--cc", run.cc, "pfc | dcqcn | dcqcn-rev");
  run_cmd->add_option("--seed", run.seed, "RNG seed");
  run_cmd->add_option("--out", run.out, "Output directory")->capture_default_str();
  run_cmd->add_option("--bin-ns", run.bin_ns, "Throughput bin width");
  run_cmd->add_option("--until-ms", run.until_ms, "Stop at this time");
  run_cmd->add_flag("--audit", run.audit, "Check buffer accounting after every event");

  SweepArgs sweep;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Run scenario variants");
  sweep_cmd->add_option("--scenario", sweep.scenario, "Base scenario")
      ->capture_default_str();
  sweep_cmd->add_option("--out-root", sweep.out_root, "Root output directory")
      ->capture_default_str();
  sweep_cmd->add_option("--cc", sweep.ccs, "Mechanisms to sweep")->delimiter(',');
  sweep_cmd->add_option("--seeds", sweep.seeds, "Seeds to sweep")->delimiter(',');
  sweep_cmd->add_option("--overrides", sweep.overrides,
                        "JSON file of named merge patches");
  sweep_cmd->add_option("--jobs", sweep.jobs, "Concurrent runs")
      ->check(CLI::PositiveNumber);

  std::string to_validate;
  CLI::App* validate_cmd = app.add_subcommand("validate", "Check a scenario");
  validate_cmd->add_option("--scenario", to_validate, "Preset name or JSON file")
      ->required();

  std::string preset_cc = "dcqcn-rev";
  CLI::App* preset_cmd =
      app.add_subcommand("preset", "Print the paper64 preset as JSON");
  preset_cmd->add_option("--cc", preset_cc, "Mechanism")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : Code(ExitStatus::kValidation);
  }

  try {
    if (*run_cmd) return DoRun(run);
    if (*sweep_cmd) return DoSweep(sweep);
    if (*validate_cmd) return DoValidate(to_validate);
    if (*preset_cmd) {
      std::cout << lsim::ScenarioToJson(lsim::Paper64Preset(CcOrThrow(preset_cc)))
                       .dump(2)
                << "\n";
      return 0;
    }
  } catch (const lsim::Error& e) {
    std::cerr << "sim: " << lsim::ErrorCodeName(e.code()) << ": " << e.what()
              << "\n";
    return CodeFor(e);
  }
  return 0;
}
