#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <string>
#include <vector>

#include "lsim/ids.hpp"
#include "lsim/link.hpp"
#include "lsim/marking.hpp"
#include "lsim/packet.hpp"
#include "lsim/random.hpp"

namespace lsim {

struct BufferConfig {
  std::int64_t input_limit_bytes = 512 * 1024;
  std::int64_t pool_bytes = 64ll * 1024 * 1024;
  std::int32_t mtu_bytes = 1024;

  bool operator==(const BufferConfig&) const = default;
};

struct PfcConfig {
  bool enabled = true;
  std::int64_t xoff_bytes = 384 * 1024;
  std::int64_t xon_bytes = 352 * 1024;
  std::int64_t headroom_bytes = 128 * 1024;

  bool operator==(const PfcConfig&) const = default;
};

struct SwitchConfig {
  BufferConfig buffer;
  PfcConfig pfc;
  MarkingPolicy marking;
};

// Effects a switch needs from the surrounding network.
class SwitchEnv {
 public:
  virtual ~SwitchEnv() = default;
  // A packet started serializing on `out`.
  virtual void OnSwitchTransmit(SwitchId sw, PortId out, Packet packet,
                                const Transmission& tx) = 0;
  // XOFF (pause = true) or XON toward whoever transmits into `in_port`.
  virtual void OnSwitchPfc(SwitchId sw, PortId in_port, bool pause,
                           SimTime now) = 0;
};

struct SwitchPortSpec {
  bool connected = false;
  LinkConfig link;  // transmit direction
};

struct SwitchCounters {
  std::int64_t pauses_sent = 0;
  std::int64_t resumes_sent = 0;
  std::int64_t max_input_occupancy = 0;
  std::int64_t drops = 0;
  std::int64_t marks = 0;
};

// Input-queued switch with one FIFO per input port and a shared buffer pool.
// Per-output byte and flow counters shadow the FIFOs for ECP. A FIFO whose
// head targets a busy or paused output blocks everything behind it.
class Switch {
 public:
  Switch(SwitchId id, std::vector<SwitchPortSpec> ports,
         std::vector<PortId> forwarding, const SwitchConfig& config, Rng* rng,
         SwitchEnv* env);

  // Throws Error(kBufferOverflow) if the input limit would be exceeded.
  void Receive(Packet packet, PortId in_port, SimTime now);
  void OnTransmitDone(PortId out, SimTime now);
  // Pause state of `out` as dictated by the downstream receiver.
  void OnPfc(PortId out, bool pause, SimTime now);

  SwitchId id() const { return id_; }
  int num_ports() const { return static_cast<int>(inputs_.size()); }
  PortId OutputFor(HostId dst) const { return forwarding_.at(dst); }

  std::int64_t input_occupancy(PortId p) const { return inputs_.at(p).occupancy; }
  std::size_t input_depth(PortId p) const { return inputs_.at(p).fifo.size(); }
  std::int64_t output_occupancy(PortId p) const {
    return outputs_.at(p).occupancy;
  }
  std::int32_t flows_toward(PortId p) const {
    return static_cast<std::int32_t>(outputs_.at(p).flows.size());
  }
  std::int64_t shared_pool_used() const { return pool_used_; }
  bool upstream_paused(PortId in_port) const {
    return inputs_.at(in_port).paused_upstream;
  }
  bool output_paused(PortId out) const { return outputs_.at(out).paused; }
  bool output_busy(PortId out) const { return outputs_.at(out).busy; }
  const SwitchCounters& counters() const { return counters_; }

  // Walks all queues and recomputes every counter; returns violations.
  std::vector<std::string> Audit() const;

 private:
  struct Queued {
    Packet packet;
    PortId out;
  };
  struct Input {
    std::deque<Queued> fifo;
    std::int64_t occupancy = 0;
    bool paused_upstream = false;
  };
  struct Output {
    bool connected = false;
    Link link;
    bool busy = false;
    bool paused = false;
    std::size_t rr_next = 0;
    std::int64_t occupancy = 0;
    std::map<FlowId, std::int32_t> flows;  // resident packets per flow
  };

  void Mark(Packet& packet, PortId in_port, PortId out);
  void PfcCheck(PortId in_port, SimTime now);
  // Grants `out` to the next eligible input head in round-robin order.
  bool Arbitrate(PortId out, SimTime now);

  SwitchId id_;
  std::vector<PortId> forwarding_;
  SwitchConfig config_;
  Rng* rng_;
  SwitchEnv* env_;
  std::vector<Input> inputs_;
  std::vector<Output> outputs_;
  std::int64_t pool_used_ = 0;
  SwitchCounters counters_;
};

}  // namespace lsim
