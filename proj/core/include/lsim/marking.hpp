#pragma once

#include <cstdint>
#include <optional>

#include "lsim/packet.hpp"
#include "lsim/random.hpp"

namespace lsim {

enum class MarkingKind : std::uint8_t { kNone, kCp, kEcp };

struct MarkingPolicy {
  MarkingKind kind = MarkingKind::kNone;
  std::int64_t k_min_bytes = 15 * 1024;
  std::int64_t k_max_bytes = 15 * 1024;
  double p_max = 1.0;

  // V: the single detection threshold when k_min == k_max.
  std::int64_t threshold() const { return k_min_bytes; }

  bool operator==(const MarkingPolicy&) const = default;
};

// RED-style marking probability for a queue holding `occupancy` bytes:
// 0 below k_min, 1 at or above k_max, linear up to p_max in between.
double MarkProbability(const MarkingPolicy& policy, std::int64_t occupancy);

// Baseline congestion point: decides on the input-FIFO occupancy after
// enqueue. Draws from `rng` only in the probabilistic band.
bool CpShouldMark(const MarkingPolicy& policy, std::int64_t input_occupancy,
                  Rng& rng);

// Enhanced congestion point: decides on the bytes resident in the switch that
// target the packet's own output, and describes that output on a mark.
std::optional<SeverityStamp> EcpEvaluate(const MarkingPolicy& policy,
                                         std::int64_t output_occupancy,
                                         std::int32_t resident_flows,
                                         std::int64_t output_capacity,
                                         Rng& rng);

// Marks the packet and attaches `stamp`, keeping an existing stamp when it
// implies a smaller fair share.
void ApplyStamp(Packet& packet, const SeverityStamp& stamp);

}  // namespace lsim
