// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "lsim/rate_control.hpp"
#include "lsim/runner.hpp"
#include "lsim/simulation.hpp"
#include "lsim/topology.hpp"
#include "oracles.hpp"

namespace {

using lsim::CcMechanism;
using lsim::FlowId;
using lsim::RunResult;
using lsim::SimTime;

constexpr double kGBps = 1e9;
const SimTime kWindowFrom = SimTime::FromUs(1500);
const SimTime kWindowTo = SimTime::FromUs(2900);
constexpr FlowId kVictim = 3;
const std::vector<FlowId> kIncast = {0, 1, 4, 8};

struct Verdict {
  std::string id;
  std::string title;
  bool pass = false;
  std::string detail;
};

std::string Fmt(const char* fmt, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, a);
  return buf;
}

double WindowRate(const RunResult& r, std::optional<FlowId> flow) {
  return lsim::MeanThroughput(r.report, flow, kWindowFrom, kWindowTo) / kGBps;
}

// Smallest per-bin rate inside the window; printed for context only.
double WindowMinBin(const RunResult& r, FlowId flow) {
  double lo = 1e300;
  for (const auto& p : lsim::ThroughputSeries(r.report, flow)) {
    if (p.bin_start >= kWindowFrom && p.bin_start + r.report.bin_width <= kWindowTo) {
      lo = std::min(lo, p.bytes_per_s / kGBps);
    }
  }
  return lo;
}

RunResult RunPaper(CcMechanism cc, std::uint64_t seed = 1, bool audit = false) {
  lsim::ScenarioConfig c = lsim::Paper64Preset(cc);
  c.seed = seed;
  c.audit = audit;
  lsim::Simulation sim(c);
  return sim.Run();
}

Verdict A1(const RunResult& rev) {
  Verdict v{"A1", "fair-share convergence (dcqcn-rev)", false, ""};
  const double victim = WindowRate(rev, kVictim);
  const double agg = WindowRate(rev, std::nullopt);
  bool ok = victim >= 11.875;
  std::ostringstream d;
  d << "F3=" << Fmt("%.3f", victim) << " GB/s (need >= 11.875, min bin "
    << Fmt("%.3f", WindowMinBin(rev, kVictim)) << ")";
  for (FlowId f : kIncast) {
    const double x = WindowRate(rev, f);
    ok = ok && std::abs(x - 3.125) <= 0.3125;
    d << " F" << f << "=" << Fmt("%.3f", x);
  }
  ok = ok && std::abs(agg - 25.0) <= 1.25;
  d << " (need 3.125+-10%) aggregate=" << Fmt("%.3f", agg) << " (need 25+-5%)";
  v.pass = ok;
  v.detail = d.str();
  return v;
}

Verdict A2(const RunResult& pfc) {
  Verdict v{"A2", "PFC-only degradation", false, ""};
  const double victim = WindowRate(pfc, kVictim);
  const double agg = WindowRate(pfc, std::nullopt);
  v.pass = victim < 0.75 * 12.5 && agg >= 12.5 && agg <= 20.0;
  v.detail = "F3=" + Fmt("%.3f", victim) + " GB/s (need < 9.375) aggregate=" +
             Fmt("%.3f", agg) + " GB/s (need [12.5, 20])";
  return v;
}

Verdict A3(const RunResult& pfc, const RunResult& dcqcn, const RunResult& rev) {
  Verdict v{"A3", "completion ordering", false, ""};
  if (!pfc.drained || !dcqcn.drained || !rev.drained) {
    v.detail = "a run did not drain";
    return v;
  }
  const double tp = lsim::GlobalCompletionTime(pfc.report).ToMs();
  const double td = lsim::GlobalCompletionTime(dcqcn.report).ToMs();
  const double tr = lsim::GlobalCompletionTime(rev.report).ToMs();
  v.pass = tr <= tp && tp < td && td >= 1.3 * tp;
  v.detail = "T(dcqcn-rev)=" + Fmt("%.4f", tr) + " ms T(pfc)=" + Fmt("%.4f", tp) +
             " ms T(dcqcn)=" + Fmt("%.4f", td) + " ms (need rev <= pfc < dcqcn, dcqcn >= 1.3 pfc)";
  return v;
}

Verdict A4(const RunResult& dcqcn, const RunResult& rev) {
  Verdict v{"A4", "victim marking purity", false, ""};
  const auto& ecp = rev.report.flows.at(kVictim);
  const auto& cp = dcqcn.report.flows.at(kVictim);
  v.pass = ecp.marked_packets == 0 && ecp.cnps_received == 0 && cp.marked_packets > 0;
  v.detail = "ECP: F3 marked=" + std::to_string(ecp.marked_packets) +
             " cnps=" + std::to_string(ecp.cnps_received) +
             " (need 0/0); CP: F3 marked=" + std::to_string(cp.marked_packets) + " (need > 0)";
  return v;
}

Verdict A5() {
  Verdict v{"A5", "losslessness and conservation", false, ""};
  bool ok = true;
  int runs = 0;
  std::int64_t drops = 0;
  std::string first_problem;
  for (CcMechanism cc : {CcMechanism::kPfcOnly, CcMechanism::kDcqcn, CcMechanism::kDcqcnRev}) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const RunResult r = RunPaper(cc, seed);
      ++runs;
      drops += r.report.TotalDrops();
      bool this_ok = r.drained && !r.fatal_code && r.report.TotalDrops() == 0;
      for (const auto& [id, f] : r.report.flows) {
        this_ok = this_ok && f.injected_bytes == f.delivered_bytes &&
                  f.generated_bytes == f.injected_bytes;
      }
      if (!this_ok && first_problem.empty()) {
        first_problem = std::string(lsim::CcName(cc)) + " seed " + std::to_string(seed) +
                        (r.fatal_code ? ": " + r.fatal_message : "");
      }
      ok = ok && this_ok;
    }
  }
  // Accounting audit after every event on the scaled-down tree.
  std::int64_t audits = 0;
  for (CcMechanism cc : {CcMechanism::kPfcOnly, CcMechanism::kDcqcn, CcMechanism::kDcqcnRev}) {
    lsim::ScenarioConfig c;
    c.name = "audit";
    c.half_radix = 2;
    c.stages = 2;
    c.SetCc(cc);
    c.audit = true;
    c.flows = {{0, 0, 3, 12'500'000'000, SimTime::Zero(), SimTime::FromUs(300), lsim::TrafficMode::kOpenLoop},
               {1, 1, 3, 12'500'000'000, SimTime::Zero(), SimTime::FromUs(300), lsim::TrafficMode::kOpenLoop},
               {2, 2, 3, 12'500'000'000, SimTime::Zero(), SimTime::FromUs(300), lsim::TrafficMode::kOpenLoop},
               {3, 0, 2, 12'500'000'000, SimTime::Zero(), SimTime::FromUs(300), lsim::TrafficMode::kOpenLoop}};
    lsim::Simulation sim(c);
    const RunResult r = sim.Run();
    audits += r.audits_run;
    const bool this_ok = r.drained && !r.fatal_code &&
                         r.audits_run == static_cast<std::int64_t>(r.stats.events_processed);
    if (!this_ok && first_problem.empty()) {
      first_problem = "audit run " + std::string(lsim::CcName(cc)) + ": " + r.fatal_message;
    }
    ok = ok && this_ok;
  }
  v.pass = ok;
  v.detail = std::to_string(runs) + " paper64 runs, drops=" + std::to_string(drops) +
             ", " + std::to_string(audits) + " per-event audits on k'=2 n=2" +
             (first_problem.empty() ? "" : "; first problem: " + first_problem);
  return v;
}

std::string Slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Verdict A6() {
  Verdict v{"A6", "determinism", false, ""};
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / "lsim_acceptance_a6";
  fs::remove_all(root);
  bool ok = true;
  std::string mismatch;
  for (CcMechanism cc : {CcMechanism::kPfcOnly, CcMechanism::kDcqcn, CcMechanism::kDcqcnRev}) {
    lsim::ScenarioConfig c = lsim::Paper64Preset(cc);
    c.seed = 17;
    const std::string name(lsim::CcName(cc));
    const auto a = lsim::RunScenario(c, root / name / "a");
    const auto b = lsim::RunScenario(c, root / name / "b");
    ok = ok && a.status == lsim::ExitStatus::kDrained && b.status == a.status;
    for (const char* f : {"deliveries.csv", "summary.csv", "run.json"}) {
      const std::string x = Slurp(root / name / "a" / f);
      if (x.empty() || x != Slurp(root / name / "b" / f)) {
        ok = false;
        if (mismatch.empty()) mismatch = name + "/" + f;
      }
    }
  }
  fs::remove_all(root);
  v.pass = ok;
  v.detail = ok ? "3 mechanisms x 3 files byte-identical across repeated runs"
                : "mismatch in " + mismatch;
  return v;
}

Verdict A7() {
  Verdict v{"A7", "rate-law unit oracle", false, ""};
  std::mt19937_64 rng(0xA7);
  double worst = 0;
  int sequences = 0;
  for (; sequences < 1000; ++sequences) {
    lsim::DcqcnParams p;
    p.g = std::uniform_real_distribution<double>(1.0 / 1024, 0.5)(rng);
    p.fast_recovery_steps = static_cast<int>(rng() % 8);
    p.alpha_init = std::uniform_real_distribution<double>(0, 1)(rng);
    p.rai = std::uniform_real_distribution<double>(1e6, 1e8)(rng);
    p.rhai = std::uniform_real_distribution<double>(1e7, 1e9)(rng);
    oracle::Dcqcn ref{p.line_rate, p.g, p.rai, p.rhai, p.min_rate, p.fast_recovery_steps,
                      p.line_rate, p.line_rate, p.alpha_init};
    lsim::RpState s = lsim::InitialRpState(p);
    const int len = 1 + static_cast<int>(rng() % 300);
    for (int i = 0; i < len; ++i) {
      switch (rng() % 4) {
        case 0: s = lsim::RpOnCnp(s, p); ref.Cnp(); break;
        case 1: s = lsim::RpOnIncrease(s, lsim::IncreaseTrigger::kTimer, p); ref.Timer(); break;
        case 2: s = lsim::RpOnIncrease(s, lsim::IncreaseTrigger::kByteCounter, p); ref.ByteCounter(); break;
        default: s = lsim::RpOnAlphaDecay(s, p); ref.AlphaDecay(); break;
      }
      auto rel = [](double a, double b) {
        return a == b ? 0.0 : std::abs(a - b) / std::max(std::abs(a), std::abs(b));
      };
      worst = std::max({worst, rel(s.rc, ref.rc), rel(s.rt, ref.rt), rel(s.alpha, ref.alpha)});
      if (s.timer_events != ref.t_count || s.byte_events != ref.b_count) worst = 1;
    }
  }
  v.pass = worst < 1e-12;
  v.detail = std::to_string(sequences) + " random sequences, worst relative error " +
             Fmt("%.3g", worst) + " (need < 1e-12)";
  return v;
}

Verdict A8() {
  Verdict v{"A8", "routing oracle", false, ""};
  bool ok = true;
  long pairs = 0;
  for (auto [k, n] : {std::pair{2, 2}, std::pair{4, 3}}) {
    const lsim::Topology t = lsim::BuildKaryNTree(k, n);
    ok = ok && lsim::Validate(t).ok();
    for (lsim::HostId s = 0; s < t.num_hosts(); ++s) {
      for (lsim::HostId d = 0; d < t.num_hosts(); ++d) {
        if (s == d) continue;
        ++pairs;
        const auto expect = oracle::DmodKPath(t, s, d);
        ok = ok && expect && lsim::Route(t, s, d).hops == *expect;
      }
    }
    // Up-port balance: each non-top switch sends the same number of
    // destinations through every up-port.
    for (lsim::SwitchId sw = 0; sw < t.num_switches(); ++sw) {
      if (t.node(sw).stage == n - 1) continue;
      std::map<lsim::PortId, int> load;
      for (lsim::HostId d = 0; d < t.num_hosts(); ++d) {
        const lsim::PortId p = t.ForwardPort(sw, d);
        if (t.IsUpPort(p)) ++load[p];
      }
      ok = ok && static_cast<int>(load.size()) == k;
      for (const auto& [p, c] : load) ok = ok && c == load.begin()->second;
    }
  }
  v.pass = ok;
  v.detail = std::to_string(pairs) + " host pairs on (2,2) and (4,3) match the brute-force "
             "up-down enumerator; up-port balance checked on every switch";
  return v;
}

Verdict A9(const RunResult& rev) {
  Verdict v{"A9", "CNP targeting (dcqcn-rev)", false, ""};
  const std::set<lsim::HostId> allowed = {0, 1, 4, 8};
  bool ok = !rev.report.cnps_by_target.empty();
  std::ostringstream d;
  d << "CNPs by target:";
  for (const auto& [host, n] : rev.report.cnps_by_target) {
    d << " N" << host << "=" << n;
    ok = ok && allowed.contains(host);
  }
  d << " (need only N0/N1/N4/N8)";
  v.pass = ok;
  v.detail = d.str();
  return v;
}

}  // namespace

int main() {
  const RunResult pfc = RunPaper(CcMechanism::kPfcOnly);
  const RunResult dcqcn = RunPaper(CcMechanism::kDcqcn);
  const RunResult rev = RunPaper(CcMechanism::kDcqcnRev);

  const std::vector<Verdict> verdicts = {A1(rev), A2(pfc),        A3(pfc, dcqcn, rev),
                                         A4(dcqcn, rev), A5(),    A6(),
                                         A7(),      A8(),         A9(rev)};
  int failed = 0;
  for (const Verdict& v : verdicts) {
    std::printf("%s %s: %s\n    %s\n", v.id.c_str(), v.pass ? "PASS" : "FAIL", v.title.c_str(),
                v.detail.c_str());
    if (!v.pass) ++failed;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(verdicts.size()) - failed,
              verdicts.size());
  return failed == 0 ? 0 : 1;
}
