#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "lsim/engine.hpp"
#include "lsim/flow.hpp"
#include "lsim/link.hpp"
#include "lsim/metrics.hpp"
#include "lsim/notification.hpp"
#include "lsim/packet.hpp"
#include "lsim/reaction_point.hpp"

namespace lsim {

class HostEnv {
 public:
  virtual ~HostEnv() = default;
  virtual void OnHostTransmit(HostId host, Packet packet,
                              const Transmission& tx) = 0;
  virtual void OnCnpEmitted(HostId at, const CnpMessage& cnp) = 0;
};

// End node: per-flow source queues behind one line-rate uplink, a per-flow
// rate limiter driven by the flow's reaction point, and (optionally) a
// notification point for traffic it receives.
class Host {
 public:
  Host(HostId id, const LinkConfig& uplink, std::int32_t mtu_bytes,
       Engine* engine, HostEnv* env, Recorder* recorder,
       std::optional<NpPolicy> np);
  Host(const Host&) = delete;
  Host& operator=(const Host&) = delete;
  ~Host();

  HostId id() const { return id_; }

  void AddFlow(const FlowSpec& spec, std::unique_ptr<ReactionPoint> rp);

  void OnFlowStart(FlowId flow, SimTime now);
  void OnFlowStop(FlowId flow, SimTime now);
  void OnTransmitDone(SimTime now);
  void OnPfc(bool pause, SimTime now);
  void OnCnp(const CnpMessage& cnp, SimTime now);
  // Throws Error(kMisroutedPacket) if the packet is not addressed here.
  void Receive(const Packet& packet, SimTime now);

  // Injects the next packet if the uplink is free and some flow's limiter
  // allows it; otherwise arms a wake-up for the earliest eligible instant.
  std::optional<FlowId> TrySend(SimTime now);

  bool paused() const { return paused_; }
  const Link& uplink() const { return uplink_; }
  double rate(FlowId flow) const;
  const FlowSource& source(FlowId flow) const;
  const ReactionPoint& reaction_point(FlowId flow) const;
  SimTime next_allowed(FlowId flow) const;
  const NotificationPoint* notification_point() const {
    return np_ ? &*np_ : nullptr;
  }
  std::vector<FlowId> flow_ids() const;

  // Rate-limiter gap for one packet at `rate` bytes/second.
  static SimTime InterPacketGap(std::int64_t bytes, double rate);

 private:
  struct FlowSlot {
    FlowSource source;
    std::unique_ptr<ReactionPoint> rp;
    SimTime next_allowed;
    std::uint64_t next_seq = 0;
    bool finished = false;
  };

  FlowSlot& Slot(FlowId flow);
  const FlowSlot& Slot(FlowId flow) const;
  void ArmWake(SimTime at);

  HostId id_;
  Link uplink_;
  std::int32_t mtu_;
  Engine* engine_;
  HostEnv* env_;
  Recorder* recorder_;
  std::optional<NotificationPoint> np_;
  std::vector<FlowSlot> flows_;
  std::size_t rr_next_ = 0;
  bool paused_ = false;
  bool transmitting_ = false;
  EventHandle wake_;
};

}  // namespace lsim
