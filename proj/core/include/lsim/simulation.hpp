#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lsim/engine.hpp"
#include "lsim/error.hpp"
#include "lsim/host.hpp"
#include "lsim/metrics.hpp"
#include "lsim/random.hpp"
#include "lsim/scenario.hpp"
#include "lsim/switch.hpp"
#include "lsim/topology.hpp"

namespace lsim {

struct RunResult {
  RunReport report;
  SimStats stats;
  bool drained = false;
  std::optional<ErrorCode> fatal_code;
  std::string fatal_message;
  std::int64_t audits_run = 0;
  std::int64_t erp_anomalies = 0;
};

// One fully wired run of a scenario: topology, switches, hosts and recorder
// bound to a private engine.
class Simulation : private SwitchEnv, private HostEnv {
 public:
  explicit Simulation(const ScenarioConfig& config);
  ~Simulation() override;
  Simulation(const Simulation&) = delete;
  Simulation& operator=(const Simulation&) = delete;

  // Runs to drain or to the configured bound. Fatal model errors (buffer
  // overflow, misrouting, audit failure) end the run and are reported in the
  // result rather than thrown.
  RunResult Run();

  const ScenarioConfig& config() const { return config_; }
  const Topology& topology() const { return topology_; }
  Engine& engine() { return engine_; }
  const Switch& switch_at(SwitchId id) const { return *switches_.at(id); }
  const Host& host(HostId id) const { return *hosts_.at(id); }
  const Path& flow_path(FlowId flow) const;

 private:
  void OnSwitchTransmit(SwitchId sw, PortId out, Packet packet,
                        const Transmission& tx) override;
  void OnSwitchPfc(SwitchId sw, PortId in_port, bool pause,
                   SimTime now) override;
  void OnHostTransmit(HostId host, Packet packet,
                      const Transmission& tx) override;
  void OnCnpEmitted(HostId at, const CnpMessage& cnp) override;

  void DeliverTo(const PortPeer& peer, Packet packet, SimTime at);
  void Audit();
  RunReport Collect(SimTime now);

  ScenarioConfig config_;
  Topology topology_;
  Engine engine_;
  Rng rng_;
  std::unique_ptr<Recorder> recorder_;
  std::vector<std::unique_ptr<Switch>> switches_;
  std::vector<std::unique_ptr<Host>> hosts_;
  std::map<FlowId, Path> paths_;
  std::int64_t audits_run_ = 0;
};

}  // namespace lsim
