#pragma once

#include <map>
#include <optional>

#include "lsim/link.hpp"
#include "lsim/packet.hpp"
#include "lsim/topology.hpp"

namespace lsim {

struct CnpMessage {
  FlowId flow = 0;
  HostId target = 0;  // the flow's source host
  std::optional<SeverityStamp> severity;
  SimTime emitted_at;
  SimTime deliver_at;
};

struct NpPolicy {
  SimTime min_gap = SimTime::FromUs(50);
  bool relay_severity = false;

  bool operator==(const NpPolicy&) const = default;
};

inline NpPolicy BaselineNpPolicy() { return {SimTime::FromUs(50), false}; }
inline NpPolicy EnhancedNpPolicy() { return {SimTime::FromUs(10), true}; }

// Destination-side CNP generator. Unmarked packets never produce a CNP; marked
// ones do unless the flow got a CNP less than min_gap ago.
class NotificationPoint {
 public:
  struct FlowState {
    std::optional<SimTime> last_cnp_sent_at;
    std::optional<SeverityStamp> latest_severity;
    std::int64_t cnps_sent = 0;
  };

  explicit NotificationPoint(NpPolicy policy) : policy_(policy) {}

  // The returned message has deliver_at == emitted_at; see TransportCnp.
  std::optional<CnpMessage> OnDelivery(const Packet& packet, SimTime now);

  const NpPolicy& policy() const { return policy_; }
  const FlowState* state(FlowId flow) const;

 private:
  NpPolicy policy_;
  std::map<FlowId, FlowState> flows_;
};

inline constexpr std::int64_t kControlFrameBytes = 64;

// Out-of-band reverse-path latency: every link of the path contributes its
// propagation delay plus one 64 B serialization.
SimTime CnpLatency(const Path& path, const LinkConfig& link);

CnpMessage TransportCnp(CnpMessage cnp, const Path& path,
                        const LinkConfig& link);

}  // namespace lsim
