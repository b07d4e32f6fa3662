#include "lsim/runner.hpp"

#include <atomic>
#include <thread>

namespace lsim {

using nlohmann::json;

json RunMeta(const ScenarioConfig& config, const RunResult& result) {
  json meta;
  meta["scenario"] = ScenarioToJson(config);
  meta["seed"] = config.seed;
  meta["cc"] = CcName(config.cc);
  meta["engine"] = {{"events_processed", result.stats.events_processed},
                    {"final_time_ps", result.stats.final_time.ps()}};
  meta["truncated"] = !result.drained && !result.fatal_code;
  meta["error"] = result.fatal_code
                      ? json{{"code", ErrorCodeName(*result.fatal_code)},
                             {"message", result.fatal_message}}
                      : json();
  meta["erp_missing_severity"] = result.erp_anomalies;
  meta["audits_run"] = result.audits_run;
  return meta;
}

RunOutcome RunScenario(const ScenarioConfig& config,
                       const std::filesystem::path& out_dir) {
  RunOutcome outcome;
  try {
    Simulation sim(config);
    outcome.result = sim.Run();
  } catch (const Error& e) {
    outcome.status = e.code() == ErrorCode::kValidation ? ExitStatus::kValidation
                                                        : ExitStatus::kFatal;
    outcome.message = e.what();
    return outcome;
  }
  const RunResult& r = outcome.result;
  if (r.fatal_code) {
    outcome.status = ExitStatus::kFatal;
    outcome.message = std::string(ErrorCodeName(*r.fatal_code)) + ": " +
                      r.fatal_message;
  } else if (!r.drained) {
    outcome.status = ExitStatus::kNotDrained;
    outcome.message = "run ended at " +
                      std::to_string(r.stats.final_time.ToMs()) +
                      " ms with traffic still undelivered";
  }
  try {
    EmitReport(r.report, RunMeta(config, r), out_dir);
  } catch (const Error& e) {
    outcome.status = ExitStatus::kFatal;
    outcome.message = e.what();
  }
  return outcome;
}

std::vector<SweepVariant> CanonicalCcSweep() {
  std::vector<SweepVariant> v;
  for (CcMechanism cc : {CcMechanism::kPfcOnly, CcMechanism::kDcqcn,
                         CcMechanism::kDcqcnRev}) {
    const std::string name(CcName(cc));
    v.push_back({name, json{{"cc", {{"mechanism", name}}},
                            {"marking", {{"kind", nullptr}}}}});
  }
  return v;
}

std::vector<SweepEntry> Sweep(const json& base,
                              const std::vector<SweepVariant>& variants,
                              const std::filesystem::path& out_root,
                              int jobs) {
  std::vector<SweepEntry> entries(variants.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < variants.size(); i = next++) {
      const SweepVariant& v = variants[i];
      SweepEntry& e = entries[i];
      e.name = v.name;
      try {
        json doc = base;
        doc.merge_patch(v.patch);
        const RunOutcome out =
            RunScenario(ScenarioFromJson(doc), out_root / v.name);
        e.status = out.status;
        e.message = out.message;
      } catch (const Error& err) {
        e.status = err.code() == ErrorCode::kValidation ||
                           err.code() == ErrorCode::kParse
                       ? ExitStatus::kValidation
                       : ExitStatus::kFatal;
        e.message = err.what();
      }
    }
  };
  const std::size_t n = std::min<std::size_t>(
      static_cast<std::size_t>(std::max(jobs, 1)), variants.size());
  std::vector<std::thread> threads;
  for (std::size_t t = 1; t < n; ++t) threads.emplace_back(worker);
  worker();
  for (std::thread& t : threads) t.join();
  return entries;
}

}  // namespace lsim
