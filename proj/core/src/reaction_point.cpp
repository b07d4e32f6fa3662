#include "lsim/reaction_point.hpp"

namespace lsim {

DcqcnReactionPoint::DcqcnReactionPoint(Engine* engine, const DcqcnParams& params)
    : engine_(engine), params_(params), state_(InitialRpState(params)) {}

DcqcnReactionPoint::~DcqcnReactionPoint() {
  engine_->Cancel(alpha_timer_);
  engine_->Cancel(rate_timer_);
}

void DcqcnReactionPoint::OnCnp(const CnpMessage&, SimTime now) {
  state_ = RpOnCnp(state_, params_);
  engaged_ = true;
  bytes_since_ = 0;
  if (stopped_) return;
  ArmAlphaTimer(now);
  ArmRateTimer(now);
}

void DcqcnReactionPoint::OnBytesSent(std::int64_t bytes, SimTime) {
  if (!engaged_ || stopped_ || RpAtLineRate(state_, params_)) return;
  bytes_since_ += bytes;
  while (bytes_since_ >= params_.byte_counter_bytes) {
    bytes_since_ -= params_.byte_counter_bytes;
    Increase(IncreaseTrigger::kByteCounter);
  }
}

void DcqcnReactionPoint::Stop() {
  stopped_ = true;
  engine_->Cancel(alpha_timer_);
  engine_->Cancel(rate_timer_);
  alpha_timer_ = {};
  rate_timer_ = {};
}

void DcqcnReactionPoint::ArmAlphaTimer(SimTime now) {
  engine_->Cancel(alpha_timer_);
  alpha_timer_ = engine_->Schedule(
      now + params_.alpha_timer, EventKind::kTimerExpiry, [this] {
        alpha_timer_ = {};
        state_ = RpOnAlphaDecay(state_, params_);
        ArmAlphaTimer(engine_->Now());
      });
}

void DcqcnReactionPoint::ArmRateTimer(SimTime now) {
  engine_->Cancel(rate_timer_);
  rate_timer_ = {};
  if (RpAtLineRate(state_, params_)) return;
  rate_timer_ = engine_->Schedule(
      now + params_.rate_timer, EventKind::kTimerExpiry, [this] {
        rate_timer_ = {};
        Increase(IncreaseTrigger::kTimer);
        ArmRateTimer(engine_->Now());
      });
}

void DcqcnReactionPoint::Increase(IncreaseTrigger trigger) {
  state_ = RpOnIncrease(state_, trigger, params_);
}

ErpReactionPoint::ErpReactionPoint(Engine* engine, const ErpParams& params,
                                   const DcqcnParams& fallback,
                                   SimTime jitter_phase)
    : engine_(engine),
      params_(params),
      fallback_(fallback),
      state_(InitialErpState(params)),
      fallback_alpha_(fallback.alpha_init),
      jitter_phase_(jitter_phase) {}

ErpReactionPoint::~ErpReactionPoint() { engine_->Cancel(recovery_timer_); }

void ErpReactionPoint::OnCnp(const CnpMessage& cnp, SimTime now) {
  if (cnp.severity) {
    state_ = ErpOnCnp(state_, *cnp.severity, now);
  } else {
    ++missing_severity_;
    RpState s{state_.rc, state_.rc, fallback_alpha_, 0, 0};
    s = RpOnCnp(s, fallback_);
    state_.rc = s.rc;
    state_.last_cnp_at = now;
    state_.seen_cnp = true;
    fallback_alpha_ = s.alpha;
  }
  if (stopped_) return;
  if (state_.rc < params_.line_rate) {
    ArmRecovery(now + params_.quiet + jitter_phase_);
  } else {
    engine_->Cancel(recovery_timer_);
    recovery_timer_ = {};
  }
}

void ErpReactionPoint::Stop() {
  stopped_ = true;
  engine_->Cancel(recovery_timer_);
  recovery_timer_ = {};
}

void ErpReactionPoint::ArmRecovery(SimTime at) {
  engine_->Cancel(recovery_timer_);
  recovery_timer_ =
      engine_->Schedule(at, EventKind::kTimerExpiry, [this] {
        recovery_timer_ = {};
        const SimTime now = engine_->Now();
        if (ErpRecoveryAllowed(state_, now, params_)) {
          state_ = ErpRecoverStep(state_, params_);
        }
        if (state_.rc < params_.line_rate) {
          ArmRecovery(now + params_.increase_interval);
        }
      });
}

}  // namespace lsim
