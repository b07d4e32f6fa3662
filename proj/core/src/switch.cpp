#include "lsim/switch.hpp"

#include <algorithm>
#include <string>

#include "lsim/error.hpp"

namespace lsim {

Switch::Switch(SwitchId id, std::vector<SwitchPortSpec> ports,
               std::vector<PortId> forwarding, const SwitchConfig& config,
               Rng* rng, SwitchEnv* env)
    : id_(id),
      forwarding_(std::move(forwarding)),
      config_(config),
      rng_(rng),
      env_(env),
      inputs_(ports.size()),
      outputs_(ports.size()) {
  for (std::size_t p = 0; p < ports.size(); ++p) {
    outputs_[p].connected = ports[p].connected;
    outputs_[p].link = Link(ports[p].link);
  }
}

void Switch::Receive(Packet packet, PortId in_port, SimTime now) {
  const PortId out = forwarding_.at(packet.dst);
  Input& in = inputs_.at(in_port);
  const std::int64_t size = packet.size_bytes;
  if (in.occupancy + size > config_.buffer.input_limit_bytes) {
    ++counters_.drops;
    throw Error(ErrorCode::kBufferOverflow,
                "switch " + std::to_string(id_) + " input " +
                    std::to_string(in_port) + " would hold " +
                    std::to_string(in.occupancy + size) + " B (limit " +
                    std::to_string(config_.buffer.input_limit_bytes) +
                    " B); PFC headroom is too small");
  }
  in.occupancy += size;
  pool_used_ += size;
  Output& o = outputs_.at(out);
  o.occupancy += size;
  ++o.flows[packet.flow];
  counters_.max_input_occupancy =
      std::max(counters_.max_input_occupancy, in.occupancy);

  Mark(packet, in_port, out);

  const bool was_empty = in.fifo.empty();
  in.fifo.push_back({std::move(packet), out});
  PfcCheck(in_port, now);
  if (was_empty) Arbitrate(out, now);
}

void Switch::Mark(Packet& packet, PortId in_port, PortId out) {
  const MarkingPolicy& policy = config_.marking;
  switch (policy.kind) {
    case MarkingKind::kNone:
      return;
    case MarkingKind::kCp:
      if (CpShouldMark(policy, inputs_[in_port].occupancy, *rng_)) {
        packet.ecn_marked = true;
        ++counters_.marks;
      }
      return;
    case MarkingKind::kEcp: {
      const Output& o = outputs_[out];
      auto stamp =
          EcpEvaluate(policy, o.occupancy, static_cast<std::int32_t>(o.flows.size()),
                      o.link.config().capacity_bytes_per_s, *rng_);
      if (stamp) {
        ApplyStamp(packet, *stamp);
        ++counters_.marks;
      }
      return;
    }
  }
}

void Switch::PfcCheck(PortId in_port, SimTime now) {
  if (!config_.pfc.enabled) return;
  Input& in = inputs_[in_port];
  if (!in.paused_upstream && in.occupancy >= config_.pfc.xoff_bytes) {
    in.paused_upstream = true;
    ++counters_.pauses_sent;
    env_->OnSwitchPfc(id_, in_port, true, now);
  } else if (in.paused_upstream && in.occupancy < config_.pfc.xon_bytes) {
    in.paused_upstream = false;
    ++counters_.resumes_sent;
    env_->OnSwitchPfc(id_, in_port, false, now);
  }
}

bool Switch::Arbitrate(PortId out, SimTime now) {
  Output& o = outputs_[out];
  if (!o.connected || o.busy || o.paused) return false;

  const std::size_t n = inputs_.size();
  std::size_t chosen = n;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t i = (o.rr_next + k) % n;
    const Input& in = inputs_[i];
    if (!in.fifo.empty() && in.fifo.front().out == out) {
      chosen = i;
      break;
    }
  }
  if (chosen == n) return false;
  o.rr_next = (chosen + 1) % n;

  Input& in = inputs_[chosen];
  Packet packet = std::move(in.fifo.front().packet);
  in.fifo.pop_front();
  const std::int64_t size = packet.size_bytes;
  in.occupancy -= size;
  pool_used_ -= size;
  o.occupancy -= size;
  if (auto it = o.flows.find(packet.flow); --it->second == 0) o.flows.erase(it);

  o.busy = true;
  const Transmission tx = o.link.Transmit(size, now);
  env_->OnSwitchTransmit(id_, out, std::move(packet), tx);

  PfcCheck(static_cast<PortId>(chosen), now);
  // The new head may be waiting for a different, idle output.
  if (!in.fifo.empty() && in.fifo.front().out != out) {
    Arbitrate(in.fifo.front().out, now);
  }
  return true;
}

void Switch::OnTransmitDone(PortId out, SimTime now) {
  outputs_.at(out).busy = false;
  Arbitrate(out, now);
}

void Switch::OnPfc(PortId out, bool pause, SimTime now) {
  Output& o = outputs_.at(out);
  o.paused = pause;
  if (!pause) Arbitrate(out, now);
}

std::vector<std::string> Switch::Audit() const {
  std::vector<std::string> v;
  const std::string who = "switch " + std::to_string(id_) + ": ";
  std::vector<std::int64_t> out_bytes(outputs_.size(), 0);
  std::vector<std::map<FlowId, std::int32_t>> out_flows(outputs_.size());
  std::int64_t in_total = 0;
  for (std::size_t p = 0; p < inputs_.size(); ++p) {
    const Input& in = inputs_[p];
    std::int64_t bytes = 0;
    for (const Queued& q : in.fifo) {
      bytes += q.packet.size_bytes;
      out_bytes[q.out] += q.packet.size_bytes;
      ++out_flows[q.out][q.packet.flow];
      if (q.packet.severity && !q.packet.ecn_marked) {
        v.push_back(who + "severity stamp on an unmarked packet");
      }
    }
    if (bytes != in.occupancy) {
      v.push_back(who + "input " + std::to_string(p) + " counter " +
                  std::to_string(in.occupancy) + " != resident " +
                  std::to_string(bytes));
    }
    if (in.occupancy > config_.buffer.input_limit_bytes) {
      v.push_back(who + "input " + std::to_string(p) + " over its limit");
    }
    if (config_.pfc.enabled &&
        in.occupancy > config_.pfc.xoff_bytes + config_.pfc.headroom_bytes) {
      v.push_back(who + "input " + std::to_string(p) +
                  " exceeds xoff + headroom");
    }
    in_total += bytes;
  }
  std::int64_t out_total = 0;
  for (std::size_t p = 0; p < outputs_.size(); ++p) {
    if (out_bytes[p] != outputs_[p].occupancy) {
      v.push_back(who + "output " + std::to_string(p) + " counter " +
                  std::to_string(outputs_[p].occupancy) + " != resident " +
                  std::to_string(out_bytes[p]));
    }
    if (out_flows[p] != outputs_[p].flows) {
      v.push_back(who + "output " + std::to_string(p) + " flow set mismatch");
    }
    out_total += outputs_[p].occupancy;
  }
  if (pool_used_ != in_total || pool_used_ != out_total) {
    v.push_back(who + "pool " + std::to_string(pool_used_) + " vs inputs " +
                std::to_string(in_total) + " vs outputs " +
                std::to_string(out_total));
  }
  if (pool_used_ > config_.buffer.pool_bytes) {
    v.push_back(who + "shared pool over capacity");
  }
  return v;
}

}  // namespace lsim
