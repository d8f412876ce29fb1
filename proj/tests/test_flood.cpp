#include <gtest/gtest.h>

#include "wsn/flood.hpp"

using namespace wsn;

namespace {

std::vector<int> bfs_hops(const Topology& t, NodeId from) {
  std::vector<int> d(t.size(), -1);
  d[t.index_of(from)] = 0;
  for (NodeId v : t.component(from))
    for (NodeId w : t.neighbors(v))
      if (d[t.index_of(w)] < 0) d[t.index_of(w)] = d[t.index_of(v)] + 1;
  return d;
}

}  // namespace

TEST(Flood, EveryNodeRelaysOnceOnGrid) {
  const Topology g = make_grid(5, 5, 25, 25);
  const ProtocolConstants c;
  const auto hops = bfs_hops(g, 0);
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    const FloodReport r = simulate_flood(g, 0, NodeId{24}, c, seed);
    ASSERT_EQ(r.reached.size(), 25u);
    EXPECT_EQ(r.initiator_transmissions, 1);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const FloodNodeRecord& n = r.nodes[i];
      if (n.id == 0) continue;
      ASSERT_TRUE(n.first_rx);
      // no copy can arrive before the hop distance worth of preambles
      EXPECT_GE(*n.first_rx, hops[i] * c.D_BRp);
      EXPECT_LE(*n.first_rx, hops[i] * (c.W_BR + c.D_BRp));
      EXPECT_EQ(n.tx_count, n.id == 24 ? 0 : 1);
      EXPECT_GE(n.copies_heard, 1);
    }
    ASSERT_TRUE(r.source_ready);
    EXPECT_EQ(*r.source_ready, *r.at(g, 24).first_rx + c.B_SRC);
  }
}

TEST(Flood, LineIsSequential) {
  std::vector<Node> row;
  for (int i = 0; i < 6; ++i) row.push_back({static_cast<NodeId>(i), {10.0 * i, 0}});
  const Topology t = build_udg(row, 10);
  const ProtocolConstants c;
  const FloodReport r = simulate_flood(t, 0, std::nullopt, c, 4);
  for (int i = 1; i < 5; ++i) {
    const auto& n = r.at(t, static_cast<NodeId>(i));
    const auto& next = r.at(t, static_cast<NodeId>(i + 1));
    ASSERT_TRUE(n.tx_start);
    EXPECT_GE(*n.tx_start, *n.first_rx);
    EXPECT_LE(*n.tx_start, *n.first_rx + c.W_BR);
    EXPECT_EQ(*next.first_rx, *n.tx_start + c.D_BRp);
  }
  EXPECT_EQ(r.at(t, 5).tx_count, 1);  // no source: the far end relays too
}

TEST(Flood, DisconnectedPartNotReached) {
  const Topology t = build_udg({{0, {0, 0}}, {1, {5, 0}}, {2, {100, 0}}}, 10);
  const FloodReport r = simulate_flood(t, 0, std::nullopt, ProtocolConstants{}, 1);
  EXPECT_EQ(r.reached, (std::vector<NodeId>{0, 1}));
  EXPECT_FALSE(r.at(t, 2).first_rx);
}

TEST(Flood, Deterministic) {
  const Topology g = make_grid(4, 4, 25, 25);
  const auto a = simulate_flood(g, 0, NodeId{15}, ProtocolConstants{}, 77);
  const auto b = simulate_flood(g, 0, NodeId{15}, ProtocolConstants{}, 77);
  for (std::size_t i = 0; i < g.size(); ++i) {
    EXPECT_EQ(a.nodes[i].first_rx, b.nodes[i].first_rx);
    EXPECT_EQ(a.nodes[i].tx_start, b.nodes[i].tx_start);
  }
}

TEST(Flood, TransmissionsDoNotOverlapAtOneNode) {
  const Topology g = make_grid(5, 5, 25, 25);
  std::vector<std::vector<Interval>> air;
  simulate_flood(g, 0, NodeId{24}, ProtocolConstants{}, 3, {}, &air);
  ASSERT_EQ(air.size(), g.size());
  std::size_t total = 0;
  for (const auto& v : air) total += v.size();
  EXPECT_EQ(total, 24u);  // initiator plus 23 relays
}

TEST(Flood, CollisionsCanLoseCopies) {
  const Topology g = make_grid(5, 5, 25, 25);
  FloodOptions opt;
  opt.collisions = true;
  opt.initiator_retries = 3;
  long heard_clean = 0, heard_lossy = 0;
  for (std::uint64_t s = 1; s <= 200; ++s) {
    const FloodReport r = simulate_flood(g, 0, NodeId{24}, ProtocolConstants{}, s, opt);
    for (const auto& n : r.nodes) {
      EXPECT_LE(n.tx_count, 1);
      heard_lossy += n.copies_heard;
    }
    for (const auto& n : simulate_flood(g, 0, NodeId{24}, ProtocolConstants{}, s).nodes) heard_clean += n.copies_heard;
  }
  EXPECT_LT(heard_lossy, heard_clean);
}

TEST(Flood, SourceWaitBound) {
  const ProtocolConstants c;
  EXPECT_GT(c.B_SRC, b_src_min(4, c));
  EXPECT_EQ(flood_bound(8, c), 1232ms);
}
