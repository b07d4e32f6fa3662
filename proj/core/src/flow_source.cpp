#include "lsim/flow.hpp"

#include <algorithm>

namespace lsim {
namespace {

Int128 Denominator(std::int32_t mtu) {
  return static_cast<Int128>(mtu) * kPsPerSecond;
}

}  // namespace

FlowSource::FlowSource(const FlowSpec& spec, std::int32_t mtu_bytes)
    : spec_(spec), mtu_(mtu_bytes), total_packets_(0) {
  const Int128 span = (spec.stop - spec.start).ps();
  const Int128 num = span * spec.demand_bytes_per_s;
  // Packets whose generation instant falls strictly before stop.
  if (num > 0) {
    total_packets_ = static_cast<std::int64_t>((num - 1) / Denominator(mtu_));
  }
}

std::int64_t FlowSource::ScheduledBy(SimTime t) const {
  if (t <= spec_.start) return 0;
  const Int128 num =
      static_cast<Int128>((t - spec_.start).ps()) * spec_.demand_bytes_per_s;
  const auto n = static_cast<std::int64_t>(num / Denominator(mtu_));
  return std::min(n, total_packets_);
}

SimTime FlowSource::GenerationTime(std::int64_t i) const {
  const Int128 num = static_cast<Int128>(i) * Denominator(mtu_);
  const Int128 ps =
      (num + spec_.demand_bytes_per_s - 1) / spec_.demand_bytes_per_s;
  return spec_.start + SimTime::FromPs(static_cast<std::int64_t>(ps));
}

std::int64_t FlowSource::Backlog(SimTime t) const {
  const std::int64_t pending = ScheduledBy(t) - injected_;
  if (spec_.mode == TrafficMode::kOpenLoop) return pending;
  return (t >= spec_.start && t < spec_.stop && pending > 0) ? 1 : 0;
}

std::optional<SimTime> FlowSource::NextReady(SimTime t) const {
  if (injected_ >= total_packets_) return std::nullopt;
  const SimTime ready = std::max(t, GenerationTime(injected_ + 1));
  if (spec_.mode == TrafficMode::kClosedLoop && ready >= spec_.stop) {
    return std::nullopt;
  }
  return ready;
}

bool FlowSource::Exhausted(SimTime t) const {
  if (injected_ >= total_packets_) return true;
  return spec_.mode == TrafficMode::kClosedLoop && t >= spec_.stop;
}

std::int64_t FlowSource::GeneratedPackets(SimTime t) const {
  if (spec_.mode == TrafficMode::kClosedLoop) return injected_;
  return ScheduledBy(t);
}

}  // namespace lsim
