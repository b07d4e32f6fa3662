#include "lsim/topology.hpp"

#include <gtest/gtest.h>

#include "lsim/error.hpp"
#include "oracles.hpp"

namespace lsim {
namespace {

TEST(TopologyTest, SizesOfPaperTree) {
  const Topology t = BuildKaryNTree(4, 3);
  EXPECT_EQ(t.num_hosts(), 64);
  EXPECT_EQ(t.num_switches(), 48);
  EXPECT_EQ(t.switches_per_stage(), 16);
  EXPECT_TRUE(Validate(t).ok());
  EXPECT_EQ(t.node(t.SwitchAt(2, 0)).ports.size(), 4u);
  EXPECT_EQ(t.node(t.SwitchAt(1, 0)).ports.size(), 8u);
}

TEST(TopologyTest, RejectsDegenerateParameters) {
  EXPECT_THROW(BuildKaryNTree(1, 3), Error);
  EXPECT_THROW(BuildKaryNTree(4, 0), Error);
}

TEST(TopologyTest, HostsAttachToLeafDownPorts) {
  const Topology t = BuildKaryNTree(4, 3);
  const PortPeer& a = t.HostAttachment(13);
  EXPECT_EQ(a.id, t.SwitchAt(0, 3));
  EXPECT_EQ(a.port, 1);
  EXPECT_EQ(t.node(a.id).ports[a.port], (PortPeer{PeerKind::kHost, 13, 0}));
}

TEST(TopologyTest, SameLeafRouteIsOneHop) {
  const Topology t = BuildKaryNTree(4, 3);
  const Path p = Route(t, 0, 3);
  ASSERT_EQ(p.hops.size(), 1u);
  EXPECT_EQ(p.hops[0], (Hop{t.SwitchAt(0, 0), 3}));
  EXPECT_EQ(p.links(), 2);
}

TEST(TopologyTest, PathLengthFollowsCommonAncestor) {
  const Topology t = BuildKaryNTree(4, 3);
  EXPECT_EQ(Route(t, 0, 5).hops.size(), 3u);   // lca at stage 1
  EXPECT_EQ(Route(t, 0, 16).hops.size(), 5u);  // lca at stage 2
  const Path p = Route(t, 3, 12);
  EXPECT_EQ(p.up_hops, 1);
  EXPECT_EQ(p.down_hops, 2);
}

TEST(TopologyTest, UpPortsFollowDestinationDigits) {
  const Topology t = BuildKaryNTree(4, 3);
  // dst 27 = (1,2,3) in base 4, least significant first: 3, 2, 1.
  const Path p = Route(t, 32, 27);
  ASSERT_EQ(p.up_hops, 2);
  EXPECT_EQ(p.hops[0].out, 4 + 3);
  EXPECT_EQ(p.hops[1].out, 4 + 2);
}

TEST(TopologyTest, SharedUplinkInPaperIncast) {
  // F0, F1 (-> N16) and F3 (-> N12) leave leaf 0 through the same up-port.
  const Topology t = BuildKaryNTree(4, 3);
  EXPECT_EQ(Route(t, 0, 16).hops[0], Route(t, 3, 12).hops[0]);
  EXPECT_EQ(Route(t, 1, 16).hops[0], Route(t, 3, 12).hops[0]);
}

TEST(TopologyTest, InvalidHostsAreRejected) {
  const Topology t = BuildKaryNTree(2, 2);
  try {
    Route(t, 0, 4);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidHost);
  }
  EXPECT_THROW(Route(t, 2, 2), Error);
  EXPECT_THROW(Route(t, -1, 2), Error);
}

TEST(TopologyTest, BrokenWiringIsReportedNotWalked) {
  Topology t = BuildKaryNTree(2, 2);
  const SwitchId leaf = t.SwitchAt(0, 0);
  t.Disconnect(leaf, 2);
  EXPECT_FALSE(Validate(t).ok());
  try {
    Route(t, 0, 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidParameter);
  }
}

TEST(TopologyTest, AsymmetricRewireFailsValidation) {
  Topology t = BuildKaryNTree(2, 2);
  t.Rewire(t.SwitchAt(0, 0), 2, PortPeer{PeerKind::kSwitch, t.SwitchAt(1, 1), 0});
  EXPECT_FALSE(Validate(t).ok());
}

class RouteOracleTest : public ::testing::TestWithParam<std::pair<int, int>> {};

TEST_P(RouteOracleTest, MatchesBruteForceDmodK) {
  const auto [k, n] = GetParam();
  const Topology t = BuildKaryNTree(k, n);
  for (HostId s = 0; s < t.num_hosts(); ++s) {
    for (HostId d = 0; d < t.num_hosts(); ++d) {
      if (s == d) continue;
      const auto expect = oracle::DmodKPath(t, s, d);
      ASSERT_TRUE(expect.has_value()) << s << "->" << d;
      EXPECT_EQ(Route(t, s, d).hops, *expect) << s << "->" << d;
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Trees, RouteOracleTest,
                         ::testing::Values(std::pair{2, 1}, std::pair{2, 2},
                                           std::pair{3, 2}, std::pair{2, 3},
                                           std::pair{4, 2}));

}  // namespace
}  // namespace lsim
