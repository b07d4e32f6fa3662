#pragma once

#include <cstdint>

#include "lsim/ids.hpp"
#include "lsim/packet.hpp"
#include "lsim/sim_time.hpp"

namespace lsim {

// Baseline DCQCN reaction-point parameters. Rates are bytes/second.
struct DcqcnParams {
  double line_rate = 12.5e9;
  double g = 1.0 / 256;
  double alpha_init = 1.0;
  SimTime alpha_timer = SimTime::FromUs(55);   // K
  SimTime rate_timer = SimTime::FromUs(1500);  // T
  std::int64_t byte_counter_bytes = 10ll * 1024 * 1024;  // B
  int fast_recovery_steps = 5;                           // F
  double rai = 5e6;
  double rhai = 25e6;
  double min_rate = 12.5e6;

  bool operator==(const DcqcnParams&) const = default;
};

struct RpState {
  double rc = 0;     // current rate
  double rt = 0;     // target rate
  double alpha = 1;  // congestion estimate in [0, 1]
  int timer_events = 0;
  int byte_events = 0;

  bool operator==(const RpState&) const = default;
};

enum class IncreaseTrigger : std::uint8_t { kByteCounter, kTimer };

RpState InitialRpState(const DcqcnParams& p);

// Cut on CNP: Rt <- Rc, Rc <- Rc(1 - alpha/2), alpha <- (1-g)alpha + g, and
// both increase counters restart.
RpState RpOnCnp(RpState s, const DcqcnParams& p);

// One byte-counter or timer expiry. The fired counter is bumped, then:
// fast recovery while neither counter exceeds F, hyper increase once both
// do, additive increase otherwise.
RpState RpOnIncrease(RpState s, IncreaseTrigger trigger, const DcqcnParams& p);

// alpha <- (1-g)alpha after K without a CNP.
RpState RpOnAlphaDecay(RpState s, const DcqcnParams& p);

inline bool RpAtLineRate(const RpState& s, const DcqcnParams& p) {
  return s.rc >= p.line_rate && s.rt >= p.line_rate;
}

// Revised reaction point.
struct ErpParams {
  double line_rate = 12.5e9;
  SimTime quiet = SimTime::FromUs(100);             // Q
  SimTime increase_interval = SimTime::FromUs(50);  // T_inc
  double beta = 0.25;
  SimTime max_jitter = SimTime::FromUs(25);

  bool operator==(const ErpParams&) const = default;
};

struct ErpState {
  double rc = 0;
  SimTime last_cnp_at;
  bool seen_cnp = false;

  bool operator==(const ErpState&) const = default;
};

ErpState InitialErpState(const ErpParams& p);

// Rc <- min(Rc, root_capacity / contributing_flows).
ErpState ErpOnCnp(ErpState s, const SeverityStamp& stamp, SimTime now);

// Rc <- min(line, Rc * (1 + beta)).
ErpState ErpRecoverStep(ErpState s, const ErpParams& p);

inline bool ErpRecoveryAllowed(const ErpState& s, SimTime now,
                               const ErpParams& p) {
  return !s.seen_cnp || now - s.last_cnp_at >= p.quiet;
}

// Per-flow recovery phase in [0, max_jitter], derived from (flow, seed) only.
SimTime ErpJitterPhase(FlowId flow, std::uint64_t seed, const ErpParams& p);

}  // namespace lsim
