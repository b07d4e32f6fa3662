#include "lsim/simulation.hpp"

#include "lsim/link.hpp"

namespace lsim {

namespace {

std::vector<FlowId> FlowIds(const ScenarioConfig& config) {
  std::vector<FlowId> ids;
  for (const FlowSpec& f : config.flows) ids.push_back(f.id);
  return ids;
}

ScenarioConfig Checked(const ScenarioConfig& config) {
  const std::vector<std::string> v = ValidateScenario(config);
  if (!v.empty()) {
    std::string msg = "invalid scenario:";
    for (const std::string& s : v) msg += "\n  - " + s;
    throw Error(ErrorCode::kValidation, msg);
  }
  return config;
}

}  // namespace

Simulation::Simulation(const ScenarioConfig& config)
    : config_(Checked(config)),
      topology_(BuildKaryNTree(config_.half_radix, config_.stages)),
      rng_(config_.seed),
      recorder_(std::make_unique<Recorder>(config_.bin_width, FlowIds(config_))) {
  const SwitchConfig sw_config = config_.switch_config();
  for (SwitchId id = 0; id < topology_.num_switches(); ++id) {
    const SwitchNode& node = topology_.node(id);
    std::vector<SwitchPortSpec> ports;
    for (const PortPeer& peer : node.ports) {
      ports.push_back(SwitchPortSpec{peer.connected(), config_.link});
    }
    std::vector<PortId> forwarding;
    for (HostId dst = 0; dst < topology_.num_hosts(); ++dst) {
      forwarding.push_back(topology_.ForwardPort(id, dst));
    }
    switches_.push_back(std::make_unique<Switch>(
        id, std::move(ports), std::move(forwarding), sw_config, &rng_, static_cast<SwitchEnv*>(this)));
  }

  std::optional<NpPolicy> np;
  if (config_.cc == CcMechanism::kDcqcn) np = config_.np;
  if (config_.cc == CcMechanism::kDcqcnRev) np = config_.enp;
  for (HostId h = 0; h < topology_.num_hosts(); ++h) {
    hosts_.push_back(std::make_unique<Host>(h, config_.link,
                                            config_.buffer.mtu_bytes, &engine_,
                                            static_cast<HostEnv*>(this),
                                            recorder_.get(), np));
  }

  for (const FlowSpec& f : config_.flows) {
    paths_.emplace(f.id, Route(topology_, f.src, f.dst));
    std::unique_ptr<ReactionPoint> rp;
    switch (config_.cc) {
      case CcMechanism::kPfcOnly:
        rp = std::make_unique<FixedRateReactionPoint>(config_.line_rate());
        break;
      case CcMechanism::kDcqcn:
        rp = std::make_unique<DcqcnReactionPoint>(&engine_, config_.dcqcn);
        break;
      case CcMechanism::kDcqcnRev:
        rp = std::make_unique<ErpReactionPoint>(
            &engine_, config_.erp, config_.dcqcn,
            ErpJitterPhase(f.id, config_.seed, config_.erp));
        break;
    }
    Host* host = hosts_.at(f.src).get();
    host->AddFlow(f, std::move(rp));
    engine_.Schedule(f.start, EventKind::kFlowStart,
                     [this, host, id = f.id] { host->OnFlowStart(id, engine_.Now()); });
    engine_.Schedule(f.stop, EventKind::kFlowStop,
                     [this, host, id = f.id] { host->OnFlowStop(id, engine_.Now()); });
  }

  if (config_.audit) {
    engine_.SetPostEventHook([this](const EventRecord&) { Audit(); });
  }
}

Simulation::~Simulation() = default;

const Path& Simulation::flow_path(FlowId flow) const {
  auto it = paths_.find(flow);
  if (it == paths_.end()) {
    throw Error(ErrorCode::kUnknownFlow, "no flow " + std::to_string(flow));
  }
  return it->second;
}

void Simulation::OnSwitchTransmit(SwitchId sw, PortId out, Packet packet,
                                  const Transmission& tx) {
  Switch* s = switches_[sw].get();
  engine_.Schedule(tx.done, EventKind::kPortTransmitDone,
                   [this, s, out] { s->OnTransmitDone(out, engine_.Now()); });
  const PortPeer& peer = topology_.node(sw).ports.at(out);
  DeliverTo(peer, std::move(packet), tx.arrival);
}

void Simulation::OnSwitchPfc(SwitchId sw, PortId in_port, bool pause,
                             SimTime now) {
  const PortPeer peer = topology_.node(sw).ports.at(in_port);
  const SimTime at = now + config_.link.propagation +
                     SerializationTime(kControlFrameBytes,
                                       config_.link.capacity_bytes_per_s);
  engine_.Schedule(at, EventKind::kLinkArrival, [this, peer, pause] {
    if (peer.kind == PeerKind::kHost) {
      hosts_.at(peer.id)->OnPfc(pause, engine_.Now());
    } else if (peer.kind == PeerKind::kSwitch) {
      switches_.at(peer.id)->OnPfc(peer.port, pause, engine_.Now());
    }
  });
}

void Simulation::OnHostTransmit(HostId host, Packet packet,
                                const Transmission& tx) {
  Host* h = hosts_[host].get();
  engine_.Schedule(tx.done, EventKind::kPortTransmitDone,
                   [this, h] { h->OnTransmitDone(engine_.Now()); });
  const PortPeer& att = topology_.HostAttachment(host);
  DeliverTo(PortPeer{PeerKind::kSwitch, att.id, att.port}, std::move(packet),
            tx.arrival);
}

void Simulation::OnCnpEmitted(HostId, const CnpMessage& cnp) {
  const CnpMessage msg = TransportCnp(cnp, flow_path(cnp.flow), config_.link);
  engine_.Schedule(msg.deliver_at, EventKind::kCnpDelivery, [this, msg] {
    hosts_.at(msg.target)->OnCnp(msg, engine_.Now());
  });
}

void Simulation::DeliverTo(const PortPeer& peer, Packet packet, SimTime at) {
  if (peer.kind == PeerKind::kHost) {
    engine_.Schedule(at, EventKind::kLinkArrival,
                     [this, id = peer.id, p = std::move(packet)] {
                       hosts_.at(id)->Receive(p, engine_.Now());
                     });
  } else if (peer.kind == PeerKind::kSwitch) {
    engine_.Schedule(at + config_.hop_latency, EventKind::kLinkArrival,
                     [this, peer, p = std::move(packet)]() mutable {
                       switches_.at(peer.id)->Receive(std::move(p), peer.port,
                                                      engine_.Now());
                     });
  } else {
    throw Error(ErrorCode::kMisroutedPacket,
                "packet " + std::to_string(packet.id) +
                    " sent out of an unconnected port");
  }
}

void Simulation::Audit() {
  ++audits_run_;
  for (const auto& s : switches_) {
    const std::vector<std::string> v = s->Audit();
    if (!v.empty()) {
      throw Error(ErrorCode::kAuditFailure,
                  "switch " + std::to_string(s->id()) + ": " + v.front());
    }
  }
  for (const auto& [id, f] : recorder_->report().flows) {
    if (f.delivered_bytes > f.injected_bytes) {
      throw Error(ErrorCode::kAuditFailure,
                  "flow " + std::to_string(id) + " delivered more than it injected");
    }
  }
}

RunReport Simulation::Collect(SimTime now) {
  std::vector<SwitchTotals> totals;
  for (const auto& s : switches_) {
    const SwitchCounters& c = s->counters();
    totals.push_back(SwitchTotals{c.pauses_sent, c.max_input_occupancy, c.drops,
                                  c.marks});
  }
  recorder_->SetSwitchTotals(std::move(totals));
  for (const FlowSpec& f : config_.flows) {
    const FlowSource& src = hosts_.at(f.src)->source(f.id);
    recorder_->SetGenerated(
        f.id, src.GeneratedPackets(now) * config_.buffer.mtu_bytes);
  }
  return recorder_->report();
}

RunResult Simulation::Run() {
  RunResult result;
  try {
    if (config_.run_bound) {
      engine_.RunUntil(*config_.run_bound);
    } else {
      engine_.Run();
    }
  } catch (const Error& e) {
    result.fatal_code = e.code();
    result.fatal_message = e.what();
  }
  const SimTime now = engine_.Now();
  bool drained = !result.fatal_code;
  for (const FlowSpec& f : config_.flows) {
    const FlowSource& src = hosts_.at(f.src)->source(f.id);
    const FlowTotals& t = recorder_->report().flows.at(f.id);
    if (src.injected() != src.total_packets() ||
        t.delivered_bytes != src.total_packets() * config_.buffer.mtu_bytes) {
      drained = false;
    }
    result.erp_anomalies += hosts_.at(f.src)->reaction_point(f.id).anomalies();
  }
  Collect(now);
  if (drained) recorder_->DeclareDrained();
  result.report = recorder_->TakeReport();
  result.stats = engine_.Stats();
  result.drained = drained;
  result.audits_run = audits_run_;
  return result;
}

}  // namespace lsim
