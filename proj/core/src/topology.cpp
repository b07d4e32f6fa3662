#include "lsim/topology.hpp"

#include <set>
#include <string>

#include "lsim/error.hpp"

namespace lsim {
namespace {

int IntPow(int base, int exp) {
  int r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

std::string PortName(SwitchId sw, PortId port) {
  return "switch " + std::to_string(sw) + " port " + std::to_string(port);
}

}  // namespace

Topology::Topology(int half_radix, int stages)
    : half_radix_(half_radix),
      stages_(stages),
      per_stage_(IntPow(half_radix, stages - 1)) {}

PortId Topology::ForwardPort(SwitchId sw, HostId dst) const {
  const SwitchNode& n = node(sw);
  const int span = IntPow(half_radix_, n.stage);  // hosts per down-port
  const int group = n.index / span;
  const int digit = (dst / span) % half_radix_;
  if (dst / (span * half_radix_) == group) return digit;
  return half_radix_ + digit;
}

void Topology::Disconnect(SwitchId sw, PortId port) {
  switches_.at(sw).ports.at(port) = PortPeer{};
}

void Topology::Rewire(SwitchId sw, PortId port, PortPeer peer) {
  switches_.at(sw).ports.at(port) = peer;
}

Topology BuildKaryNTree(int half_radix, int stages) {
  if (half_radix < 2 || stages < 1) {
    throw Error(ErrorCode::kInvalidParameter,
                "k-ary n-tree needs half_radix >= 2 and stages >= 1 (got " +
                    std::to_string(half_radix) + ", " +
                    std::to_string(stages) + ")");
  }
  const int k = half_radix;
  Topology t(k, stages);
  const int per_stage = t.per_stage_;
  t.hosts_.resize(static_cast<std::size_t>(per_stage) * k);
  t.switches_.resize(static_cast<std::size_t>(per_stage) * stages);

  for (int stage = 0; stage < stages; ++stage) {
    const bool top = stage == stages - 1;
    for (int index = 0; index < per_stage; ++index) {
      SwitchNode& n = t.switches_[t.SwitchAt(stage, index)];
      n.stage = stage;
      n.index = index;
      n.ports.assign(top ? k : 2 * k, PortPeer{});
    }
  }

  for (int index = 0; index < per_stage; ++index) {
    const SwitchId leaf = t.SwitchAt(0, index);
    for (int d = 0; d < k; ++d) {
      const HostId h = index * k + d;
      t.switches_[leaf].ports[d] = PortPeer{PeerKind::kHost, h, 0};
      t.hosts_[h] = PortPeer{PeerKind::kSwitch, leaf, d};
    }
  }

  // Down-port d of (stage, group, choice) meets up-port k + choice / k^(l-1)
  // of (stage-1, group*k + d, choice mod k^(l-1)).
  for (int stage = 1; stage < stages; ++stage) {
    const int span = IntPow(k, stage);
    const int below_span = span / k;
    for (int index = 0; index < per_stage; ++index) {
      const int group = index / span;
      const int choice = index % span;
      const SwitchId upper = t.SwitchAt(stage, index);
      for (int d = 0; d < k; ++d) {
        const int lower_group = group * k + d;
        const int lower_choice = choice % below_span;
        const SwitchId lower =
            t.SwitchAt(stage - 1, lower_group * below_span + lower_choice);
        const PortId up_port = k + choice / below_span;
        t.switches_[upper].ports[d] = PortPeer{PeerKind::kSwitch, lower, up_port};
        t.switches_[lower].ports[up_port] = PortPeer{PeerKind::kSwitch, upper, d};
      }
    }
  }
  return t;
}

namespace {

struct Walk {
  Path path;
  std::string failure;
};

Walk WalkRoute(const Topology& topo, HostId src, HostId dst) {
  Walk w;
  PortPeer at = topo.HostAttachment(src);
  bool descending = false;
  const int max_hops = 2 * topo.stages();
  for (int i = 0; i < max_hops; ++i) {
    const SwitchId sw = at.id;
    const PortId out = topo.ForwardPort(sw, dst);
    const SwitchNode& n = topo.node(sw);
    if (out >= static_cast<PortId>(n.ports.size())) {
      w.failure = "no port " + std::to_string(out) + " on switch " +
                  std::to_string(sw);
      return w;
    }
    const bool up = topo.IsUpPort(out);
    if (up && descending) {
      w.failure = "valley at switch " + std::to_string(sw);
      return w;
    }
    descending = descending || !up;
    w.path.hops.push_back({sw, out});
    (up ? w.path.up_hops : w.path.down_hops) += 1;
    const PortPeer& next = n.ports[out];
    if (next.kind == PeerKind::kNone) {
      w.failure = PortName(sw, out) + " is not connected";
      return w;
    }
    if (next.kind == PeerKind::kHost) {
      if (next.id != dst) {
        w.failure = "reached host " + std::to_string(next.id) +
                    " instead of " + std::to_string(dst);
      }
      return w;
    }
    at = next;
  }
  w.failure = "hop limit exceeded";
  return w;
}

}  // namespace

Path Route(const Topology& topo, HostId src, HostId dst) {
  if (src < 0 || src >= topo.num_hosts() || dst < 0 ||
      dst >= topo.num_hosts()) {
    throw Error(ErrorCode::kInvalidHost,
                "host id out of range: " + std::to_string(src) + " -> " +
                    std::to_string(dst));
  }
  if (src == dst) {
    throw Error(ErrorCode::kInvalidHost,
                "route from host " + std::to_string(src) + " to itself");
  }
  Walk w = WalkRoute(topo, src, dst);
  if (!w.failure.empty()) {
    throw Error(ErrorCode::kInvalidParameter,
                "route " + std::to_string(src) + " -> " + std::to_string(dst) +
                    ": " + w.failure);
  }
  return w.path;
}

ValidationReport Validate(const Topology& topo) {
  ValidationReport report;
  auto& v = report.violations;
  const int k = topo.half_radix();
  const int n = topo.stages();

  int expected_hosts = 1;
  for (int i = 0; i < n; ++i) expected_hosts *= k;
  if (topo.num_hosts() != expected_hosts) {
    v.push_back("host count " + std::to_string(topo.num_hosts()) +
                " != " + std::to_string(expected_hosts));
  }
  if (topo.num_switches() != n * expected_hosts / k) {
    v.push_back("switch count " + std::to_string(topo.num_switches()) +
                " != " + std::to_string(n * expected_hosts / k));
  }

  // Every wired port must be pointed back at by its peer, and no peer port
  // may be claimed twice.
  std::set<std::pair<std::int32_t, PortId>> claimed_switch_ports;
  std::set<HostId> claimed_hosts;
  for (SwitchId sw = 0; sw < topo.num_switches(); ++sw) {
    const SwitchNode& node = topo.node(sw);
    const std::size_t want = node.stage == n - 1 ? k : 2 * k;
    if (node.ports.size() != want) {
      v.push_back("switch " + std::to_string(sw) + " has " +
                  std::to_string(node.ports.size()) + " ports, expected " +
                  std::to_string(want));
    }
    for (PortId p = 0; p < static_cast<PortId>(node.ports.size()); ++p) {
      const PortPeer& peer = node.ports[p];
      if (peer.kind == PeerKind::kNone) {
        v.push_back(PortName(sw, p) + " is not connected");
        continue;
      }
      if (peer.kind == PeerKind::kHost) {
        if (peer.id < 0 || peer.id >= topo.num_hosts()) {
          v.push_back(PortName(sw, p) + " points at invalid host");
          continue;
        }
        if (!claimed_hosts.insert(peer.id).second) {
          v.push_back("host " + std::to_string(peer.id) +
                      " wired to more than one port");
        }
        const PortPeer& back = topo.HostAttachment(peer.id);
        if (back != PortPeer{PeerKind::kSwitch, sw, p}) {
          v.push_back(PortName(sw, p) + " and host " +
                      std::to_string(peer.id) + " disagree");
        }
        continue;
      }
      if (peer.id < 0 || peer.id >= topo.num_switches() || peer.port < 0 ||
          peer.port >= static_cast<PortId>(topo.node(peer.id).ports.size())) {
        v.push_back(PortName(sw, p) + " points at a nonexistent port");
        continue;
      }
      if (!claimed_switch_ports.insert({peer.id, peer.port}).second) {
        v.push_back(PortName(peer.id, peer.port) +
                    " is wired to more than one port");
      }
      const PortPeer& back = topo.node(peer.id).ports[peer.port];
      if (back != PortPeer{PeerKind::kSwitch, sw, p}) {
        v.push_back(PortName(sw, p) + " -> " + PortName(peer.id, peer.port) +
                    " is not reciprocated");
      }
    }
  }

  std::int64_t unreachable = 0;
  for (HostId s = 0; s < topo.num_hosts(); ++s) {
    for (HostId d = 0; d < topo.num_hosts(); ++d) {
      if (s == d) continue;
      Walk w = WalkRoute(topo, s, d);
      if (!w.failure.empty()) {
        ++unreachable;
        if (unreachable <= 16) {
          v.push_back("unreachable pair " + std::to_string(s) + " -> " +
                      std::to_string(d) + ": " + w.failure);
        }
      }
    }
  }
  if (unreachable > 16) {
    v.push_back(std::to_string(unreachable - 16) +
                " further unreachable pairs");
  }
  return report;
}

}  // namespace lsim
