#include <gtest/gtest.h>

#include <set>

#include "damkit/generators.hpp"
#include "damkit/portals.hpp"
#include "test_support.hpp"

namespace damkit {
namespace {

std::set<Vertex> portal_set(const PortalIndex& pi, const SeparatorHierarchy& h, RegionId r, int scale) {
  std::set<Vertex> out;
  for (std::size_t pos : pi.portal_positions(r, scale)) out.insert(h.separator(r).vertices[pos]);
  return out;
}

TEST(Portals, FiveVertexSeparator) {
  const Graph g = generate_grid(5, 1);
  const auto h = build_hierarchy(g);
  ASSERT_EQ(h.region_count(), 1u);
  PortalIndex pi(g, h, 0.5, 16);
  EXPECT_EQ(pi.max_scale(), 4);
  EXPECT_EQ(portal_set(pi, h, 0, 0), (std::set<Vertex>{0, 1, 2, 3, 4}));
  EXPECT_EQ(portal_set(pi, h, 0, 1), (std::set<Vertex>{0, 1, 2, 3, 4}));
  EXPECT_EQ(portal_set(pi, h, 0, 2), (std::set<Vertex>{0, 1, 2, 3, 4}));
  EXPECT_EQ(portal_set(pi, h, 0, 3), (std::set<Vertex>{0, 2, 4}));
  EXPECT_EQ(portal_set(pi, h, 0, 4), (std::set<Vertex>{0, 4}));
}

TEST(Portals, RejectsEpsilonOutsideUnitInterval) {
  const Graph g = generate_grid(3, 3);
  const auto h = build_hierarchy(g);
  EXPECT_THROW(PortalIndex(g, h, 0.0, 8), PreconditionError);
  EXPECT_THROW(PortalIndex(g, h, 1.0, 8), PreconditionError);
  EXPECT_THROW(PortalIndex(g, h, -0.1, 8), PreconditionError);
}

TEST(Portals, LogHelpers) {
  EXPECT_EQ(ceil_log2(1), 0);
  EXPECT_EQ(ceil_log2(2), 1);
  EXPECT_EQ(ceil_log2(3), 2);
  EXPECT_EQ(ceil_log2(1024), 10);
  EXPECT_EQ(ceil_log2(1025), 11);
  EXPECT_EQ(floor_log2(1), 0);
  EXPECT_EQ(floor_log2(7), 2);
  EXPECT_EQ(floor_log2(8), 3);
}

TEST(Portals, DiameterBoundIsExactOnSmallGraphs) {
  for (int seed : {1, 2, 3}) {
    const Graph g = generate_random_planar(6, 5, 0.3, static_cast<std::uint64_t>(seed));
    const auto fw = testing::floyd_warshall(g);
    std::int64_t diam = 0;
    for (const auto& row : fw)
      for (const auto& d : row) diam = std::max(diam, d.value_or(0));
    EXPECT_EQ(diameter_bound(g), diam);
    EXPECT_GE(scale_bound(g), 2 * diam);
  }
}

TEST(Portals, DiameterBoundUpperBoundsOnLargeGraphs) {
  const Graph g = generate_grid(40, 40, WeightMode::random, 3);
  const std::int64_t exact = diameter_bound(g, 1 << 20);
  const std::int64_t approx = diameter_bound(g, 16);
  EXPECT_GE(approx, exact);
  EXPECT_LE(approx, 2 * exact);
}

class PortalProperties : public ::testing::TestWithParam<std::tuple<int, double>> {};

TEST_P(PortalProperties, NestedSpacedAndCovering) {
  const auto [seed, eps] = GetParam();
  const Graph g = generate_random_planar(10, 9, 0.3, static_cast<std::uint64_t>(seed));
  const auto h = build_hierarchy(g);
  const PortalIndex pi(g, h, eps, scale_bound(g));
  for (const Region& r : h.regions()) {
    const auto& sep = r.separator.vertices;
    for (int i = 1; i <= pi.max_scale(); ++i) {
      const auto cur = pi.portal_positions(r.id, i);
      const auto prev = pi.portal_positions(r.id, i - 1);
      // nested
      for (std::size_t p : cur) EXPECT_TRUE(std::binary_search(prev.begin(), prev.end(), p));
      ASSERT_FALSE(cur.empty());
      EXPECT_EQ(cur.front(), 0u);
      if (i < 2) {
        EXPECT_EQ(cur.size(), sep.size());
        continue;
      }
      const double spacing = eps * std::ldexp(1.0, i - 1);
      // spaced
      for (std::size_t k = 1; k < cur.size(); ++k) {
        EXPECT_GE(static_cast<double>(pi.along(r.id, cur[k - 1], cur[k])), spacing);
      }
      // covering: every separator vertex has a scale-i portal before it within eps 2^i
      for (std::size_t pos = 0; pos < sep.size(); ++pos) {
        auto it = std::upper_bound(cur.begin(), cur.end(), pos);
        ASSERT_NE(it, cur.begin());
        EXPECT_LT(static_cast<double>(pi.along(r.id, *std::prev(it), pos)), eps * std::ldexp(1.0, i));
      }
      // count
      EXPECT_LE(static_cast<double>(cur.size()), 1.0 + static_cast<double>(pi.along(r.id, 0, sep.size() - 1)) / spacing);
    }
  }
}

TEST_P(PortalProperties, NearestPortalMatchesScan) {
  const auto [seed, eps] = GetParam();
  const Graph g = generate_random_planar(8, 8, 0.25, static_cast<std::uint64_t>(seed));
  const auto h = build_hierarchy(g);
  const PortalIndex pi(g, h, eps, scale_bound(g));
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    const RegionId r = h.owner(v);
    const auto& sep = h.separator(r).vertices;
    for (int i = 0; i <= pi.max_scale(); ++i) {
      std::optional<std::size_t> best;
      for (std::size_t k = 0; k < sep.size(); ++k) {
        if (pi.tau(sep[k]) < i) continue;
        if (!best || pi.along(r, k, h.position(v)) < pi.along(r, *best, h.position(v))) best = k;
      }
      ASSERT_TRUE(best);
      EXPECT_EQ(pi.nearest_portal(v, i), sep[*best]) << v << " scale " << i;
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, PortalProperties,
                         ::testing::Combine(::testing::Values(1, 7, 19), ::testing::Values(0.5, 0.1, 0.01)));

TEST(Portals, PortalsNearUsesRegionDistances) {
  const Graph g = generate_grid(7, 7);
  const auto h = build_hierarchy(g);
  const PortalIndex pi(g, h, 0.25, scale_bound(g));
  for (Vertex v : {0, 24, 48}) {
    const RegionId r = h.owner(v);
    for (RegionId a = r; a != kNoRegion; a = h.region(a).parent) {
      const auto d = testing::bellman_ford(g, v, [&](Vertex x) { return h.contains(a, x); });
      const auto got = pi.portals_near(g, v, a, 2, 4);
      std::set<Vertex> want;
      for (Vertex p : h.separator(a).vertices)
        if (pi.tau(p) >= 2 && d[static_cast<std::size_t>(p)] && *d[static_cast<std::size_t>(p)] <= 4) want.insert(p);
      EXPECT_EQ(std::set<Vertex>(got.begin(), got.end()), want);
    }
  }
  for (const Region& r : h.regions()) {
    if (!h.contains(r.id, 0)) {
      EXPECT_THROW(pi.portals_near(g, 0, r.id, 1, 4), PreconditionError);
      break;
    }
  }
}

}  // namespace
}  // namespace damkit
