#pragma once

#include <cstdint>
#include <optional>

#include "lsim/ids.hpp"
#include "lsim/sim_time.hpp"

namespace lsim {

enum class TrafficMode : std::uint8_t {
  // Packets enter the source queue at the demand rate regardless of the NIC.
  kOpenLoop,
  // A packet is created only when the NIC rate limiter can take it.
  kClosedLoop,
};

struct FlowSpec {
  FlowId id = 0;
  HostId src = 0;
  HostId dst = 0;
  std::int64_t demand_bytes_per_s = 12'500'000'000;
  SimTime start;
  SimTime stop;
  TrafficMode mode = TrafficMode::kOpenLoop;

  bool operator==(const FlowSpec&) const = default;
};

// Source-side packet supply for one flow. Packet i (1-based) of the demand
// schedule exists from start + ceil(i * mtu / demand); only packets that
// exist before `stop` are ever generated.
class FlowSource {
 public:
  FlowSource(const FlowSpec& spec, std::int32_t mtu_bytes);

  const FlowSpec& spec() const { return spec_; }
  std::int32_t mtu() const { return mtu_; }

  // Packets of the demand schedule that exist at t, capped at total.
  std::int64_t ScheduledBy(SimTime t) const;
  std::int64_t total_packets() const { return total_packets_; }

  // Packets sitting in the source queue at t (closed loop: 0 or 1).
  std::int64_t Backlog(SimTime t) const;
  // Earliest time >= t with Backlog > 0, if any.
  std::optional<SimTime> NextReady(SimTime t) const;
  // Nothing will ever be injected after t.
  bool Exhausted(SimTime t) const;

  void OnInjected() { ++injected_; }
  std::int64_t injected() const { return injected_; }
  std::int64_t GeneratedPackets(SimTime t) const;

 private:
  SimTime GenerationTime(std::int64_t i) const;

  FlowSpec spec_;
  std::int32_t mtu_;
  std::int64_t total_packets_;
  std::int64_t injected_ = 0;
};

}  // namespace lsim
