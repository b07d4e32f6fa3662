#include "lsim/host.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lsim/error.hpp"

namespace lsim {

Host::Host(HostId id, const LinkConfig& uplink, std::int32_t mtu_bytes,
           Engine* engine, HostEnv* env, Recorder* recorder,
           std::optional<NpPolicy> np)
    : id_(id),
      uplink_(uplink),
      mtu_(mtu_bytes),
      engine_(engine),
      env_(env),
      recorder_(recorder) {
  if (np) np_.emplace(*np);
}

Host::~Host() { engine_->Cancel(wake_); }

void Host::AddFlow(const FlowSpec& spec, std::unique_ptr<ReactionPoint> rp) {
  flows_.push_back(FlowSlot{FlowSource(spec, mtu_), std::move(rp), spec.start});
}

Host::FlowSlot& Host::Slot(FlowId flow) {
  for (FlowSlot& s : flows_) {
    if (s.source.spec().id == flow) return s;
  }
  throw Error(ErrorCode::kUnknownFlow, "host " + std::to_string(id_) +
                                           " does not source flow " +
                                           std::to_string(flow));
}

const Host::FlowSlot& Host::Slot(FlowId flow) const {
  return const_cast<Host*>(this)->Slot(flow);
}

double Host::rate(FlowId flow) const { return Slot(flow).rp->rate(); }
const FlowSource& Host::source(FlowId flow) const { return Slot(flow).source; }
const ReactionPoint& Host::reaction_point(FlowId flow) const {
  return *Slot(flow).rp;
}
SimTime Host::next_allowed(FlowId flow) const { return Slot(flow).next_allowed; }

std::vector<FlowId> Host::flow_ids() const {
  std::vector<FlowId> ids;
  for (const FlowSlot& s : flows_) ids.push_back(s.source.spec().id);
  return ids;
}

SimTime Host::InterPacketGap(std::int64_t bytes, double rate) {
  const double ps = static_cast<double>(bytes) * 1e12 / rate;
  return SimTime::FromPs(std::llround(ps));
}

void Host::OnFlowStart(FlowId flow, SimTime now) {
  (void)Slot(flow);
  TrySend(now);
}

void Host::OnFlowStop(FlowId flow, SimTime now) {
  FlowSlot& s = Slot(flow);
  if (!s.finished && s.source.Exhausted(now)) {
    s.finished = true;
    s.rp->Stop();
  }
}

void Host::OnTransmitDone(SimTime now) {
  transmitting_ = false;
  TrySend(now);
}

void Host::OnPfc(bool pause, SimTime now) {
  paused_ = pause;
  if (!pause) TrySend(now);
}

void Host::OnCnp(const CnpMessage& cnp, SimTime now) {
  FlowSlot& s = Slot(cnp.flow);
  recorder_->RecordCnp(cnp.flow, id_, now);
  s.rp->OnCnp(cnp, now);
}

void Host::Receive(const Packet& packet, SimTime now) {
  if (packet.dst != id_) {
    throw Error(ErrorCode::kMisroutedPacket,
                "packet " + std::to_string(packet.id) + " for host " +
                    std::to_string(packet.dst) + " delivered to host " +
                    std::to_string(id_));
  }
  recorder_->RecordDelivery(packet.flow, packet.size_bytes, packet.ecn_marked,
                            now);
  if (!np_) return;
  if (auto cnp = np_->OnDelivery(packet, now)) env_->OnCnpEmitted(id_, *cnp);
}

std::optional<FlowId> Host::TrySend(SimTime now) {
  if (transmitting_ || paused_ || !uplink_.IdleAt(now)) return std::nullopt;

  const std::size_t n = flows_.size();
  std::optional<SimTime> earliest;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t i = (rr_next_ + k) % n;
    FlowSlot& s = flows_[i];
    if (s.finished) continue;
    const std::optional<SimTime> ready = s.source.NextReady(now);
    if (!ready || s.source.Exhausted(now)) {
      s.finished = true;
      s.rp->Stop();
      continue;
    }
    const SimTime at = std::max(*ready, s.next_allowed);
    if (at > now) {
      if (!earliest || at < *earliest) earliest = at;
      continue;
    }

    rr_next_ = (i + 1) % n;
    const FlowSpec& spec = s.source.spec();
    Packet packet;
    packet.id = (static_cast<std::uint64_t>(static_cast<std::uint32_t>(spec.id)) << 32) |
                s.next_seq++;
    packet.flow = spec.id;
    packet.src = spec.src;
    packet.dst = spec.dst;
    packet.size_bytes = mtu_;
    packet.injected_at = now;

    s.source.OnInjected();
    s.next_allowed = now + InterPacketGap(mtu_, s.rp->rate());
    recorder_->RecordInjection(spec.id, mtu_, now);
    s.rp->OnBytesSent(mtu_, now);
    if (s.source.Exhausted(now)) {
      s.finished = true;
      s.rp->Stop();
    }

    transmitting_ = true;
    const Transmission tx = uplink_.Transmit(mtu_, now);
    env_->OnHostTransmit(id_, std::move(packet), tx);
    return spec.id;
  }
  if (earliest) ArmWake(*earliest);
  return std::nullopt;
}

void Host::ArmWake(SimTime at) {
  if (wake_.valid() && wake_.fire_at <= at) return;
  engine_->Cancel(wake_);
  wake_ = engine_->Schedule(at, EventKind::kTimerExpiry, [this] {
    wake_ = {};
    TrySend(engine_->Now());
  });
}

}  // namespace lsim
