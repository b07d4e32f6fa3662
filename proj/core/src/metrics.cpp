#include "lsim/metrics.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "lsim/error.hpp"

namespace lsim {

std::int64_t RunReport::TotalDrops() const {
  std::int64_t n = 0;
  for (const SwitchTotals& s : switches) n += s.drops;
  return n;
}

std::int64_t RunReport::TotalPauses() const {
  std::int64_t n = 0;
  for (const SwitchTotals& s : switches) n += s.pauses_sent;
  return n;
}

Recorder::Recorder(SimTime bin_width, const std::vector<FlowId>& flows) {
  report_.bin_width = bin_width;
  for (FlowId f : flows) report_.flows[f];
}

FlowTotals* Recorder::Lookup(FlowId flow) {
  auto it = report_.flows.find(flow);
  if (it == report_.flows.end()) {
    throw Error(ErrorCode::kUnknownFlow,
                "no flow " + std::to_string(flow) + " in this run");
  }
  return &it->second;
}

bool Recorder::Late() {
  if (!closed_) return false;
  ++report_.late_records;
  return true;
}

void Recorder::RecordInjection(FlowId flow, std::int64_t bytes, SimTime t) {
  if (bytes == 0 || Late()) return;
  FlowTotals* f = Lookup(flow);
  f->injected_bytes += bytes;
  if (!f->first_injection) f->first_injection = t;
}

void Recorder::RecordDelivery(FlowId flow, std::int64_t bytes, bool marked,
                              SimTime t) {
  if (bytes == 0 || Late()) return;
  FlowTotals* f = Lookup(flow);
  f->delivered_bytes += bytes;
  if (marked) ++f->marked_packets;
  f->last_delivery = t;
  report_.bins[{t.ps() / report_.bin_width.ps(), flow}] += bytes;
}

void Recorder::RecordCnp(FlowId flow, HostId target, SimTime) {
  if (Late()) return;
  ++Lookup(flow)->cnps_received;
  ++report_.cnps_by_target[target];
}

void Recorder::SetGenerated(FlowId flow, std::int64_t bytes) {
  Lookup(flow)->generated_bytes = bytes;
}

void Recorder::SetSwitchTotals(std::vector<SwitchTotals> totals) {
  report_.switches = std::move(totals);
}

void Recorder::DeclareDrained() {
  closed_ = true;
  report_.drained = true;
}

namespace {

std::int64_t LastBin(const RunReport& report) {
  std::int64_t last = -1;
  for (const auto& [key, bytes] : report.bins) last = std::max(last, key.first);
  return last;
}

void RequireFlow(const RunReport& report, FlowId flow) {
  if (!report.flows.contains(flow)) {
    throw Error(ErrorCode::kUnknownFlow,
                "no flow " + std::to_string(flow) + " in report");
  }
}

std::vector<RatePoint> Series(const RunReport& report,
                              std::optional<FlowId> flow) {
  const std::int64_t last = LastBin(report);
  const double width_s = report.bin_width.ToSeconds();
  std::vector<RatePoint> out(static_cast<std::size_t>(last + 1));
  for (std::int64_t b = 0; b <= last; ++b) {
    out[b].bin_start = report.bin_width * b;
  }
  for (const auto& [key, bytes] : report.bins) {
    if (flow && key.second != *flow) continue;
    out[key.first].bytes_per_s += static_cast<double>(bytes) / width_s;
  }
  return out;
}

}  // namespace

std::vector<RatePoint> ThroughputSeries(const RunReport& report, FlowId flow) {
  RequireFlow(report, flow);
  return Series(report, flow);
}

std::vector<RatePoint> AggregateThroughputSeries(const RunReport& report) {
  return Series(report, std::nullopt);
}

double MeanThroughput(const RunReport& report, std::optional<FlowId> flow,
                      SimTime from, SimTime to) {
  if (flow) RequireFlow(report, *flow);
  const std::int64_t w = report.bin_width.ps();
  const std::int64_t first = (from.ps() + w - 1) / w;
  const std::int64_t end = to.ps() / w;  // exclusive
  if (end <= first) return 0.0;
  std::int64_t bytes = 0;
  for (auto it = report.bins.lower_bound({first, 0});
       it != report.bins.end() && it->first.first < end; ++it) {
    if (!flow || it->first.second == *flow) bytes += it->second;
  }
  return static_cast<double>(bytes) /
         (static_cast<double>(end - first) * report.bin_width.ToSeconds());
}

SimTime CompletionTime(const RunReport& report, FlowId flow) {
  RequireFlow(report, flow);
  const FlowTotals& f = report.flows.at(flow);
  if (!f.last_delivery) {
    throw Error(ErrorCode::kNoDeliveries,
                "flow " + std::to_string(flow) + " delivered nothing");
  }
  return *f.last_delivery;
}

SimTime GlobalCompletionTime(const RunReport& report) {
  std::optional<SimTime> t;
  for (const auto& [id, f] : report.flows) {
    if (f.last_delivery && (!t || *f.last_delivery > *t)) t = f.last_delivery;
  }
  if (!t) throw Error(ErrorCode::kNoDeliveries, "no flow delivered anything");
  return *t;
}

std::string DeliveriesCsv(const RunReport& report) {
  std::ostringstream os;
  os << "bin_start_ps,flow_id,bytes\n";
  for (const auto& [key, bytes] : report.bins) {
    os << key.first * report.bin_width.ps() << ',' << key.second << ','
       << bytes << '\n';
  }
  return os.str();
}

std::string SummaryCsv(const RunReport& report) {
  std::ostringstream os;
  os << "flow_id,generated_bytes,injected_bytes,delivered_bytes,"
        "marked_packets,cnps_received,first_injection_ps,last_delivery_ps\n";
  for (const auto& [id, f] : report.flows) {
    os << id << ',' << f.generated_bytes << ',' << f.injected_bytes << ','
       << f.delivered_bytes << ',' << f.marked_packets << ','
       << f.cnps_received << ',';
    if (f.first_injection) os << f.first_injection->ps();
    os << ',';
    if (f.last_delivery) os << f.last_delivery->ps();
    os << '\n';
  }
  return os.str();
}

nlohmann::json RunJson(const RunReport& report, nlohmann::json meta) {
  meta["bin_width_ps"] = report.bin_width.ps();
  meta["drained"] = report.drained;
  meta["drops"] = report.TotalDrops();
  meta["pauses"] = report.TotalPauses();
  meta["late_records"] = report.late_records;
  bool any = false;
  for (const auto& [id, f] : report.flows) any = any || f.last_delivery.has_value();
  meta["completion_ps"] =
      any ? nlohmann::json(GlobalCompletionTime(report).ps()) : nlohmann::json();
  nlohmann::json cnps = nlohmann::json::object();
  for (const auto& [host, n] : report.cnps_by_target) {
    cnps[std::to_string(host)] = n;
  }
  meta["cnps_by_target_host"] = cnps;
  nlohmann::json switches = nlohmann::json::array();
  for (std::size_t i = 0; i < report.switches.size(); ++i) {
    const SwitchTotals& s = report.switches[i];
    switches.push_back({{"id", i},
                        {"pauses_sent", s.pauses_sent},
                        {"max_input_occupancy", s.max_input_occupancy},
                        {"drops", s.drops},
                        {"marks", s.marks}});
  }
  meta["switches"] = switches;
  return meta;
}

namespace {

void WriteFile(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  out << body;
  out.close();
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

}  // namespace

void EmitReport(const RunReport& report, const nlohmann::json& meta,
                const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    throw Error(ErrorCode::kIo,
                "cannot create " + dir.string() + ": " + ec.message());
  }
  WriteFile(dir / "deliveries.csv", DeliveriesCsv(report));
  WriteFile(dir / "summary.csv", SummaryCsv(report));
  WriteFile(dir / "run.json", RunJson(report, meta).dump(2) + "\n");
}

}  // namespace lsim
