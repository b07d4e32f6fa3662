#include "lsim/notification.hpp"

namespace lsim {

std::optional<CnpMessage> NotificationPoint::OnDelivery(const Packet& packet,
                                                        SimTime now) {
  if (!packet.ecn_marked) return std::nullopt;
  FlowState& st = flows_[packet.flow];
  if (packet.severity) st.latest_severity = packet.severity;
  if (st.last_cnp_sent_at && now - *st.last_cnp_sent_at < policy_.min_gap) {
    return std::nullopt;
  }
  st.last_cnp_sent_at = now;
  ++st.cnps_sent;

  CnpMessage cnp;
  cnp.flow = packet.flow;
  cnp.target = packet.src;
  if (policy_.relay_severity) cnp.severity = packet.severity;
  cnp.emitted_at = now;
  cnp.deliver_at = now;
  return cnp;
}

const NotificationPoint::FlowState* NotificationPoint::state(FlowId flow) const {
  auto it = flows_.find(flow);
  return it == flows_.end() ? nullptr : &it->second;
}

SimTime CnpLatency(const Path& path, const LinkConfig& link) {
  const SimTime per_link =
      link.propagation +
      SerializationTime(kControlFrameBytes, link.capacity_bytes_per_s);
  return per_link * path.links();
}

CnpMessage TransportCnp(CnpMessage cnp, const Path& path,
                        const LinkConfig& link) {
  cnp.deliver_at = cnp.emitted_at + CnpLatency(path, link);
  return cnp;
}

}  // namespace lsim
