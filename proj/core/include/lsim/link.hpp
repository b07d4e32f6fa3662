#pragma once

#include <cstdint>

#include "lsim/sim_time.hpp"

namespace lsim {

struct LinkConfig {
  std::int64_t capacity_bytes_per_s = 12'500'000'000;  // 100 Gb/s
  SimTime propagation = SimTime::FromNs(25);

  bool operator==(const LinkConfig&) const = default;
};

// Wire time of `bytes` at `capacity_bytes_per_s`, rounded up to a picosecond.
SimTime SerializationTime(std::int64_t bytes, std::int64_t capacity_bytes_per_s);

struct Transmission {
  SimTime done;     // last bit leaves the transmitter
  SimTime arrival;  // last bit reaches the receiver
};

// One direction of a full-duplex, pipelined point-to-point link. A physical
// link is two independent Link objects.
class Link {
 public:
  explicit Link(LinkConfig config = {}) : config_(config) {}

  // Throws Error(kLinkBusy) if a transmission is still serializing at start.
  Transmission Transmit(std::int64_t bytes, SimTime start);

  bool IdleAt(SimTime t) const { return t >= busy_until_; }
  SimTime busy_until() const { return busy_until_; }
  const LinkConfig& config() const { return config_; }

 private:
  LinkConfig config_;
  SimTime busy_until_;
};

}  // namespace lsim
