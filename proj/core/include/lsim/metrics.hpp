#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "lsim/ids.hpp"
#include "lsim/sim_time.hpp"

namespace lsim {

struct FlowTotals {
  std::int64_t generated_bytes = 0;
  std::int64_t injected_bytes = 0;
  std::int64_t delivered_bytes = 0;
  std::int64_t marked_packets = 0;
  std::int64_t cnps_received = 0;
  std::optional<SimTime> first_injection;
  std::optional<SimTime> last_delivery;
};

struct SwitchTotals {
  std::int64_t pauses_sent = 0;
  std::int64_t max_input_occupancy = 0;
  std::int64_t drops = 0;
  std::int64_t marks = 0;
};

struct RunReport {
  SimTime bin_width = SimTime::FromUs(50);
  std::map<FlowId, FlowTotals> flows;
  // (bin index, flow) -> delivered bytes; only non-zero entries.
  std::map<std::pair<std::int64_t, FlowId>, std::int64_t> bins;
  std::vector<SwitchTotals> switches;
  std::map<HostId, std::int64_t> cnps_by_target;
  std::int64_t late_records = 0;
  bool drained = false;

  std::int64_t TotalDrops() const;
  std::int64_t TotalPauses() const;
};

// Accumulates one run's observations. Records arriving after DeclareDrained
// are not applied; they are counted in late_records.
class Recorder {
 public:
  Recorder(SimTime bin_width, const std::vector<FlowId>& flows);

  void RecordInjection(FlowId flow, std::int64_t bytes, SimTime t);
  void RecordDelivery(FlowId flow, std::int64_t bytes, bool marked, SimTime t);
  void RecordCnp(FlowId flow, HostId target, SimTime t);
  void SetGenerated(FlowId flow, std::int64_t bytes);
  void SetSwitchTotals(std::vector<SwitchTotals> totals);
  void DeclareDrained();

  const RunReport& report() const { return report_; }
  RunReport TakeReport() { return std::move(report_); }

 private:
  FlowTotals* Lookup(FlowId flow);
  bool Late();

  RunReport report_;
  bool closed_ = false;
};

struct RatePoint {
  SimTime bin_start;
  double bytes_per_s = 0;
};

// Dense series from bin 0 to the last non-empty bin of the run. Throws
// Error(kUnknownFlow).
std::vector<RatePoint> ThroughputSeries(const RunReport& report, FlowId flow);
std::vector<RatePoint> AggregateThroughputSeries(const RunReport& report);

// Mean rate over the bins lying entirely inside [from, to). nullopt flow
// means the aggregate.
double MeanThroughput(const RunReport& report, std::optional<FlowId> flow,
                      SimTime from, SimTime to);

// Throws Error(kNoDeliveries) / Error(kUnknownFlow).
SimTime CompletionTime(const RunReport& report, FlowId flow);
SimTime GlobalCompletionTime(const RunReport& report);

std::string DeliveriesCsv(const RunReport& report);
std::string SummaryCsv(const RunReport& report);
// Report-derived run.json fields, merged over `meta`.
nlohmann::json RunJson(const RunReport& report, nlohmann::json meta);

// Writes deliveries.csv, summary.csv and run.json into dir (created if
// needed). Throws Error(kIo) naming the offending path.
void EmitReport(const RunReport& report, const nlohmann::json& meta,
                const std::filesystem::path& dir);

}  // namespace lsim
