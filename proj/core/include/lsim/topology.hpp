#pragma once

#include <string>
#include <vector>

#include "lsim/ids.hpp"

namespace lsim {

enum class PeerKind : std::uint8_t { kNone, kHost, kSwitch };

// The far end of a switch port. For hosts, `port` is always 0.
struct PortPeer {
  PeerKind kind = PeerKind::kNone;
  std::int32_t id = -1;
  PortId port = -1;

  bool connected() const { return kind != PeerKind::kNone; }
  bool operator==(const PortPeer&) const = default;
};

struct SwitchNode {
  int stage = 0;
  int index = 0;  // position within the stage
  // Ports [0, k') face down, [k', 2k') face up. Top-stage switches only
  // carry their k' down ports.
  std::vector<PortPeer> ports;
};

// A k-ary n-tree (folded CLOS). Stage-l switch `index` decomposes as
// group * k'^l + choice: `group` names the subtree of k'^(l+1) hosts it
// serves and `choice` encodes the up-port taken at each level below it.
class Topology {
 public:
  Topology(int half_radix, int stages);

  int half_radix() const { return half_radix_; }
  int stages() const { return stages_; }
  int num_hosts() const { return static_cast<int>(hosts_.size()); }
  int num_switches() const { return static_cast<int>(switches_.size()); }
  int switches_per_stage() const { return per_stage_; }

  const SwitchNode& node(SwitchId id) const { return switches_.at(id); }
  const std::vector<SwitchNode>& switches() const { return switches_; }
  SwitchId SwitchAt(int stage, int index) const {
    return stage * per_stage_ + index;
  }
  // Leaf switch and down-port a host hangs off.
  const PortPeer& HostAttachment(HostId host) const { return hosts_.at(host); }
  bool IsUpPort(PortId port) const { return port >= half_radix_; }

  // Destination-based D-mod-K forwarding decision at one switch.
  PortId ForwardPort(SwitchId sw, HostId dst) const;

  // Mutators for wiring-fault tests; a built tree never needs them.
  void Disconnect(SwitchId sw, PortId port);
  void Rewire(SwitchId sw, PortId port, PortPeer peer);

 private:
  friend Topology BuildKaryNTree(int half_radix, int stages);

  int half_radix_;
  int stages_;
  int per_stage_;
  std::vector<SwitchNode> switches_;
  std::vector<PortPeer> hosts_;
};

struct Hop {
  SwitchId sw = -1;
  PortId out = -1;
  bool operator==(const Hop&) const = default;
};

struct Path {
  std::vector<Hop> hops;
  int up_hops = 0;
  int down_hops = 0;

  // Links traversed from source host to destination host.
  int links() const { return static_cast<int>(hops.size()) + 1; }
  bool operator==(const Path&) const = default;
};

// Throws Error(kInvalidParameter) if half_radix < 2 or stages < 1.
Topology BuildKaryNTree(int half_radix, int stages);

// Up-port at level l is floor(dst / k'^l) mod k'; ascent stops at the lowest
// common ancestor stage. Throws Error(kInvalidHost) for bad ids or src == dst,
// and Error(kInvalidParameter) if the wiring does not lead to dst.
Path Route(const Topology& topo, HostId src, HostId dst);

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

ValidationReport Validate(const Topology& topo);

}  // namespace lsim
