#pragma once

#include <cstdint>
#include <optional>

#include "lsim/ids.hpp"
#include "lsim/sim_time.hpp"

namespace lsim {

// Congestion severity carried by an ECP-marked packet and relayed by ENP.
struct SeverityStamp {
  std::int64_t root_capacity_bytes_per_s = 0;
  std::int32_t contributing_flows = 1;
  // Output occupancy / V in 1/256 steps, saturating at 0xFFFF.
  std::uint16_t occupancy_ratio_q8 = 0;

  double FairShare() const {
    return static_cast<double>(root_capacity_bytes_per_s) / contributing_flows;
  }
  double OccupancyRatio() const { return occupancy_ratio_q8 / 256.0; }
  bool operator==(const SeverityStamp&) const = default;
};

struct Packet {
  std::uint64_t id = 0;
  FlowId flow = 0;
  HostId src = 0;
  HostId dst = 0;
  std::int32_t size_bytes = 0;
  bool ecn_marked = false;
  std::optional<SeverityStamp> severity;  // only when ecn_marked
  SimTime injected_at;
};

}  // namespace lsim
