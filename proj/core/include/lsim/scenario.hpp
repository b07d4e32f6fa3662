#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "lsim/flow.hpp"
#include "lsim/link.hpp"
#include "lsim/marking.hpp"
#include "lsim/notification.hpp"
#include "lsim/rate_control.hpp"
#include "lsim/switch.hpp"

namespace lsim {

enum class CcMechanism : std::uint8_t { kPfcOnly, kDcqcn, kDcqcnRev };

std::string_view CcName(CcMechanism cc);
// Accepts pfc, pfc_only, dcqcn, dcqcn-rev and dcqcn_rev.
std::optional<CcMechanism> ParseCc(std::string_view text);
MarkingKind MarkingFor(CcMechanism cc);

struct ScenarioConfig {
  std::string name = "custom";
  std::uint64_t seed = 1;
  int half_radix = 4;
  int stages = 3;
  LinkConfig link;
  BufferConfig buffer;
  PfcConfig pfc;
  MarkingPolicy marking;  // kind always equals MarkingFor(cc) once validated
  CcMechanism cc = CcMechanism::kDcqcnRev;
  DcqcnParams dcqcn;
  NpPolicy np = BaselineNpPolicy();
  NpPolicy enp = EnhancedNpPolicy();
  ErpParams erp;
  TrafficMode traffic = TrafficMode::kOpenLoop;
  std::vector<FlowSpec> flows;
  SimTime bin_width = SimTime::FromUs(50);
  std::optional<SimTime> run_bound;
  SimTime hop_latency;
  bool audit = false;

  // Switch the mechanism and everything derived from it.
  void SetCc(CcMechanism mechanism);
  SwitchConfig switch_config() const;
  double line_rate() const {
    return static_cast<double>(link.capacity_bytes_per_s);
  }

  bool operator==(const ScenarioConfig&) const = default;
};

// The 64-node incast-with-victim experiment: k'=4, n=3, 100 Gb/s, 25 ns,
// V = 15 KiB, F0/F1/F4/F8 -> N16 and victim F3: N3 -> N12, active 1-3 ms.
ScenarioConfig Paper64Preset(CcMechanism cc = CcMechanism::kDcqcnRev);

// Violated invariants, empty when valid.
std::vector<std::string> ValidateScenario(const ScenarioConfig& config);

// Fills defaults, rejects unknown keys (Error kParse with the key path) and
// validates (Error kValidation listing every violation).
ScenarioConfig ScenarioFromJson(const nlohmann::json& doc);
// Also accepts a run.json produced by a previous run (its scenario echo).
ScenarioConfig ParseScenarioText(std::string_view text);
// `spec` is a preset name ("paper64") or a path to a JSON file.
ScenarioConfig LoadScenario(const std::string& spec);

nlohmann::json ScenarioToJson(const ScenarioConfig& config);

}  // namespace lsim
