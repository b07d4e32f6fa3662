#pragma once

#include <cstdint>
#include <memory>

#include "lsim/engine.hpp"
#include "lsim/notification.hpp"
#include "lsim/rate_control.hpp"

namespace lsim {

// Per-flow source rate controller. Owns whatever timers its law needs.
class ReactionPoint {
 public:
  virtual ~ReactionPoint() = default;

  virtual double rate() const = 0;
  virtual void OnCnp(const CnpMessage& cnp, SimTime now) = 0;
  virtual void OnBytesSent(std::int64_t bytes, SimTime now) {
    (void)bytes;
    (void)now;
  }
  // The flow has nothing left to inject; timers stop.
  virtual void Stop() {}
  // CNPs the law could not interpret (ERP without severity).
  virtual std::int64_t anomalies() const { return 0; }
};

// No end-to-end control: always at the configured rate.
class FixedRateReactionPoint : public ReactionPoint {
 public:
  explicit FixedRateReactionPoint(double rate) : rate_(rate) {}
  double rate() const override { return rate_; }
  void OnCnp(const CnpMessage&, SimTime) override {}

 private:
  double rate_;
};

class DcqcnReactionPoint : public ReactionPoint {
 public:
  DcqcnReactionPoint(Engine* engine, const DcqcnParams& params);
  ~DcqcnReactionPoint() override;

  double rate() const override { return state_.rc; }
  void OnCnp(const CnpMessage& cnp, SimTime now) override;
  void OnBytesSent(std::int64_t bytes, SimTime now) override;
  void Stop() override;

  const RpState& state() const { return state_; }

 private:
  void ArmAlphaTimer(SimTime now);
  void ArmRateTimer(SimTime now);
  void Increase(IncreaseTrigger trigger);

  Engine* engine_;
  DcqcnParams params_;
  RpState state_;
  bool engaged_ = false;  // first CNP seen
  bool stopped_ = false;
  std::int64_t bytes_since_ = 0;
  EventHandle alpha_timer_;
  EventHandle rate_timer_;
};

class ErpReactionPoint : public ReactionPoint {
 public:
  // `fallback` governs CNPs that arrive without a severity stamp.
  ErpReactionPoint(Engine* engine, const ErpParams& params,
                   const DcqcnParams& fallback, SimTime jitter_phase);
  ~ErpReactionPoint() override;

  double rate() const override { return state_.rc; }
  void OnCnp(const CnpMessage& cnp, SimTime now) override;
  void Stop() override;
  std::int64_t anomalies() const override { return missing_severity_; }

  const ErpState& state() const { return state_; }
  SimTime jitter_phase() const { return jitter_phase_; }

 private:
  void ArmRecovery(SimTime at);

  Engine* engine_;
  ErpParams params_;
  DcqcnParams fallback_;
  ErpState state_;
  double fallback_alpha_;
  SimTime jitter_phase_;
  bool stopped_ = false;
  std::int64_t missing_severity_ = 0;
  EventHandle recovery_timer_;
};

}  // namespace lsim
