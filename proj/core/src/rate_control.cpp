#include "lsim/rate_control.hpp"

#include <algorithm>

#include "lsim/random.hpp"

namespace lsim {

RpState InitialRpState(const DcqcnParams& p) {
  return RpState{p.line_rate, p.line_rate, p.alpha_init, 0, 0};
}

RpState RpOnCnp(RpState s, const DcqcnParams& p) {
  s.rt = s.rc;
  s.rc = std::max(p.min_rate, s.rc * (1.0 - s.alpha / 2.0));
  s.alpha = (1.0 - p.g) * s.alpha + p.g;
  s.timer_events = 0;
  s.byte_events = 0;
  return s;
}

RpState RpOnIncrease(RpState s, IncreaseTrigger trigger, const DcqcnParams& p) {
  if (trigger == IncreaseTrigger::kTimer) {
    ++s.timer_events;
  } else {
    ++s.byte_events;
  }
  const int hi = std::max(s.timer_events, s.byte_events);
  const int lo = std::min(s.timer_events, s.byte_events);
  const int f = p.fast_recovery_steps;
  if (lo > f) {
    s.rt = std::min(s.rt + p.rhai, p.line_rate);
  } else if (hi > f) {
    s.rt = std::min(s.rt + p.rai, p.line_rate);
  }
  s.rc = std::min((s.rc + s.rt) / 2.0, p.line_rate);
  return s;
}

RpState RpOnAlphaDecay(RpState s, const DcqcnParams& p) {
  s.alpha = (1.0 - p.g) * s.alpha;
  return s;
}

ErpState InitialErpState(const ErpParams& p) {
  return ErpState{p.line_rate, SimTime::Zero(), false};
}

ErpState ErpOnCnp(ErpState s, const SeverityStamp& stamp, SimTime now) {
  s.rc = std::min(s.rc, stamp.FairShare());
  s.last_cnp_at = now;
  s.seen_cnp = true;
  return s;
}

ErpState ErpRecoverStep(ErpState s, const ErpParams& p) {
  s.rc = std::min(p.line_rate, s.rc * (1.0 + p.beta));
  return s;
}

SimTime ErpJitterPhase(FlowId flow, std::uint64_t seed, const ErpParams& p) {
  const std::uint64_t h =
      Mix64(seed ^ Mix64(static_cast<std::uint64_t>(static_cast<std::uint32_t>(flow))));
  const auto span = static_cast<std::uint64_t>(p.max_jitter.ps()) + 1;
  return SimTime::FromPs(static_cast<std::int64_t>(h % span));
}

}  // namespace lsim
