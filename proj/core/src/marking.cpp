#include "lsim/marking.hpp"

#include <algorithm>

namespace lsim {

double MarkProbability(const MarkingPolicy& policy, std::int64_t occupancy) {
  if (occupancy < policy.k_min_bytes) return 0.0;
  if (occupancy >= policy.k_max_bytes) return 1.0;
  return policy.p_max * static_cast<double>(occupancy - policy.k_min_bytes) /
         static_cast<double>(policy.k_max_bytes - policy.k_min_bytes);
}

namespace {

bool Decide(const MarkingPolicy& policy, std::int64_t occupancy, Rng& rng) {
  const double p = MarkProbability(policy, occupancy);
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  return rng.NextUnit() < p;
}

}  // namespace

bool CpShouldMark(const MarkingPolicy& policy, std::int64_t input_occupancy,
                  Rng& rng) {
  return Decide(policy, input_occupancy, rng);
}

std::optional<SeverityStamp> EcpEvaluate(const MarkingPolicy& policy,
                                         std::int64_t output_occupancy,
                                         std::int32_t resident_flows,
                                         std::int64_t output_capacity,
                                         Rng& rng) {
  if (!Decide(policy, output_occupancy, rng)) return std::nullopt;
  SeverityStamp stamp;
  stamp.root_capacity_bytes_per_s = output_capacity;
  stamp.contributing_flows = std::max<std::int32_t>(resident_flows, 1);
  const std::int64_t q =
      output_occupancy * 256 / std::max<std::int64_t>(policy.threshold(), 1);
  stamp.occupancy_ratio_q8 =
      static_cast<std::uint16_t>(std::min<std::int64_t>(q, 0xFFFF));
  return stamp;
}

void ApplyStamp(Packet& packet, const SeverityStamp& stamp) {
  packet.ecn_marked = true;
  if (!packet.severity || stamp.FairShare() < packet.severity->FairShare()) {
    packet.severity = stamp;
  }
}

}  // namespace lsim
