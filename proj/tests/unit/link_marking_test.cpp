#include <gtest/gtest.h>

#include "lsim/error.hpp"
#include "lsim/link.hpp"
#include "lsim/marking.hpp"
#include "oracles.hpp"

namespace lsim {
namespace {

TEST(LinkTest, OneKibAt100GbpsIs81920Ps) {
  EXPECT_EQ(SerializationTime(1024, 12'500'000'000).ps(), 81'920);
  EXPECT_EQ(SerializationTime(64, 12'500'000'000).ps(), 5'120);
}

TEST(LinkTest, SerializationRoundsUp) {
  for (std::int64_t bytes : {1, 7, 999, 1500, 9000}) {
    for (std::int64_t cap : {3'000'000'007ll, 12'500'000'000ll, 1'000'000ll}) {
      EXPECT_EQ(SerializationTime(bytes, cap).ps(), oracle::SerializationPs(bytes, cap));
    }
  }
}

TEST(LinkTest, TransmitAddsPropagation) {
  Link l;
  const Transmission tx = l.Transmit(1024, SimTime::FromNs(100));
  EXPECT_EQ(tx.done.ps(), 100'000 + 81'920);
  EXPECT_EQ(tx.arrival.ps(), 100'000 + 81'920 + 25'000);
  EXPECT_FALSE(l.IdleAt(SimTime::FromNs(150)));
  EXPECT_TRUE(l.IdleAt(tx.done));
}

TEST(LinkTest, OverlappingTransmitThrows) {
  Link l;
  l.Transmit(1024, SimTime::Zero());
  try {
    l.Transmit(1024, SimTime::FromNs(10));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kLinkBusy);
  }
  EXPECT_NO_THROW(l.Transmit(1024, SimTime::FromPs(81'920)));
}

TEST(MarkingTest, SingleThresholdIsAStep) {
  MarkingPolicy p;
  EXPECT_EQ(MarkProbability(p, 15 * 1024 - 1), 0.0);
  EXPECT_EQ(MarkProbability(p, 15 * 1024), 1.0);
}

TEST(MarkingTest, RedBandIsLinear) {
  MarkingPolicy p{MarkingKind::kCp, 1000, 3000, 0.5};
  EXPECT_DOUBLE_EQ(MarkProbability(p, 2000), 0.25);
  EXPECT_DOUBLE_EQ(MarkProbability(p, 1000), 0.0);
  EXPECT_DOUBLE_EQ(MarkProbability(p, 3000), 1.0);
}

TEST(MarkingTest, CpDecidesOnInputOccupancy) {
  MarkingPolicy p{MarkingKind::kCp, 15360, 15360, 1.0};
  Rng rng(1);
  EXPECT_FALSE(CpShouldMark(p, 15359, rng));
  EXPECT_TRUE(CpShouldMark(p, 15360, rng));
}

TEST(MarkingTest, EcpStampDescribesOutput) {
  MarkingPolicy p{MarkingKind::kEcp, 15360, 15360, 1.0};
  Rng rng(1);
  EXPECT_FALSE(EcpEvaluate(p, 1024, 4, 12'500'000'000, rng));
  auto stamp = EcpEvaluate(p, 30720, 4, 12'500'000'000, rng);
  ASSERT_TRUE(stamp);
  EXPECT_EQ(stamp->contributing_flows, 4);
  EXPECT_EQ(stamp->root_capacity_bytes_per_s, 12'500'000'000);
  EXPECT_DOUBLE_EQ(stamp->FairShare(), 3.125e9);
  EXPECT_EQ(stamp->occupancy_ratio_q8, 512);
}

TEST(MarkingTest, ApplyStampKeepsTheTighterShare) {
  Packet pkt;
  ApplyStamp(pkt, SeverityStamp{12'500'000'000, 2, 300});
  ApplyStamp(pkt, SeverityStamp{12'500'000'000, 4, 280});
  ApplyStamp(pkt, SeverityStamp{12'500'000'000, 3, 900});
  EXPECT_TRUE(pkt.ecn_marked);
  ASSERT_TRUE(pkt.severity);
  EXPECT_EQ(pkt.severity->contributing_flows, 4);
}

}  // namespace
}  // namespace lsim
