#include <benchmark/benchmark.h>

#include "lsim/engine.hpp"
#include "lsim/simulation.hpp"
#include "lsim/switch.hpp"
#include "lsim/topology.hpp"

namespace {

void BM_EngineScheduleAndRun(benchmark::State& state) {
  const auto n = state.range(0);
  for (auto _ : state) {
    lsim::Engine e;
    std::int64_t sum = 0;
    for (std::int64_t i = 0; i < n; ++i) {
      e.Schedule(lsim::SimTime::FromPs((i * 7919) % 100'000), lsim::EventKind::kTimerExpiry,
                 [&sum, i] { sum += i; });
    }
    e.Run();
    benchmark::DoNotOptimize(sum);
  }
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_EngineScheduleAndRun)->Arg(1 << 10)->Arg(1 << 16);

class NullEnv : public lsim::SwitchEnv {
 public:
  void OnSwitchTransmit(lsim::SwitchId, lsim::PortId, lsim::Packet,
                        const lsim::Transmission&) override {}
  void OnSwitchPfc(lsim::SwitchId, lsim::PortId, bool, lsim::SimTime) override {}
};

void BM_SwitchForward(benchmark::State& state) {
  NullEnv env;
  lsim::Rng rng(1);
  lsim::SwitchConfig config;
  config.marking.kind = lsim::MarkingKind::kEcp;
  std::vector<lsim::SwitchPortSpec> ports(8, lsim::SwitchPortSpec{true, lsim::LinkConfig{}});
  std::vector<lsim::PortId> fwd = {0, 1, 2, 3, 4, 5, 6, 7};
  lsim::Switch sw(0, ports, fwd, config, &rng, &env);
  lsim::SimTime t;
  lsim::Packet p;
  p.size_bytes = 1024;
  std::int64_t i = 0;
  for (auto _ : state) {
    p.flow = static_cast<lsim::FlowId>(i % 16);
    p.dst = static_cast<lsim::HostId>(i % 8);
    sw.Receive(p, static_cast<lsim::PortId>((i + 3) % 8), t);
    t += lsim::SimTime::FromPs(81'920);
    sw.OnTransmitDone(p.dst, t);
    ++i;
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SwitchForward);

void BM_Route(benchmark::State& state) {
  const lsim::Topology t = lsim::BuildKaryNTree(4, 3);
  lsim::HostId s = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(lsim::Route(t, s, (s * 37 + 11) % 64 == s ? (s + 1) % 64 : (s * 37 + 11) % 64));
    s = (s + 1) % 64;
  }
}
BENCHMARK(BM_Route);

void BM_Paper64(benchmark::State& state) {
  const auto cc = static_cast<lsim::CcMechanism>(state.range(0));
  std::uint64_t events = 0;
  for (auto _ : state) {
    lsim::Simulation sim(lsim::Paper64Preset(cc));
    events += sim.Run().stats.events_processed;
  }
  state.SetLabel(std::string(lsim::CcName(cc)));
  state.counters["events/s"] =
      benchmark::Counter(static_cast<double>(events), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_Paper64)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
