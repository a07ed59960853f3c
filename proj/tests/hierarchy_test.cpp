#include <gtest/gtest.h>

#include <random>
#include <set>
#include <sstream>

#include "damkit/generators.hpp"
#include "damkit/hierarchy.hpp"
#include "test_support.hpp"

namespace damkit {
namespace {

void expect_structural_invariants(const Graph& g, const SeparatorHierarchy& h) {
  // every vertex on exactly one separator
  std::vector<int> count(static_cast<std::size_t>(g.vertex_count()), 0);
  for (const Region& r : h.regions()) {
    for (Vertex v : r.separator.vertices) ++count[static_cast<std::size_t>(v)];
  }
  for (int c : count) EXPECT_EQ(c, 1);
  for (const Region& r : h.regions()) {
    // separator is the oracle's shortest path inside the region
    auto in_r = [&](Vertex v) { return std::binary_search(r.members.begin(), r.members.end(), v); };
    if (g.vertex_count() <= 16) {
      auto brute = testing::brute_shortest_path(g, r.separator.front(), r.separator.back(), in_r);
      ASSERT_TRUE(brute);
      EXPECT_EQ(brute->vertices, r.separator.vertices);
    }
    auto sp = shortest_path(g, r.separator.front(), r.separator.back(), in_r);
    ASSERT_TRUE(sp);
    EXPECT_EQ(sp->vertices, r.separator.vertices);
    // nesting
    if (r.parent != kNoRegion) {
      const auto& pm = h.region(r.parent).members;
      for (Vertex v : r.members) EXPECT_TRUE(std::binary_search(pm.begin(), pm.end(), v));
      EXPECT_LT(r.members.size(), pm.size());
    }
    // any edge leaving the region ends on an external separator
    const auto ext = h.external_separators(r.id);
    for (Vertex v : r.members) {
      for (const Arc& a : g.neighbors(v)) {
        if (in_r(a.to)) continue;
        const RegionId o = h.owner(a.to);
        EXPECT_TRUE(std::find(ext.begin(), ext.end(), o) != ext.end())
            << "edge " << v << "-" << a.to << " leaves region " << r.id;
      }
    }
  }
}

TEST(Hierarchy, SingleVertex) {
  Graph g(1);
  const auto h = build_hierarchy(g);
  ASSERT_EQ(h.region_count(), 1u);
  EXPECT_EQ(h.region(0).separator.vertices, std::vector<Vertex>{0});
  EXPECT_TRUE(h.region(0).is_leaf());
  EXPECT_EQ(h.height(), 1);
}

TEST(Hierarchy, PathGraphHasHeightOne) {
  for (int n : {2, 3, 7, 20}) {
    const Graph g = generate_grid(n, 1);
    const auto h = build_hierarchy(g);
    EXPECT_EQ(h.height(), 1) << n;
    EXPECT_EQ(h.region(0).separator.vertices.size(), static_cast<std::size_t>(n));
  }
}

TEST(Hierarchy, GridInvariants) {
  for (int n : {3, 4, 8}) {
    const Graph g = generate_grid(n, n);
    const auto h = build_hierarchy(g);
    expect_structural_invariants(g, h);
  }
  const Graph weighted = generate_random_planar(9, 7, 0.25, 5);
  expect_structural_invariants(weighted, build_hierarchy(weighted));
}

TEST(Hierarchy, ExternalSeparatorsAreRootDown) {
  const Graph g = generate_grid(8, 8);
  const auto h = build_hierarchy(g);
  for (const Region& r : h.regions()) {
    const auto ext = h.external_separators(r.id);
    EXPECT_EQ(ext.size(), static_cast<std::size_t>(r.depth));
    if (!ext.empty()) {
      EXPECT_EQ(ext.front(), h.root());
      EXPECT_EQ(ext.back(), r.parent);
    }
    for (std::size_t i = 1; i < ext.size(); ++i) EXPECT_EQ(h.region(ext[i]).parent, ext[i - 1]);
  }
}

TEST(Hierarchy, LowestCommonRegion) {
  const Graph g = generate_grid(3, 3);
  const auto h = build_hierarchy(g);
  // u = v: the deepest region containing u is its owner
  for (Vertex v = 0; v < 9; ++v) EXPECT_EQ(h.lowest_common_region(v, v), h.owner(v));
  // root separator vertices pull everything to the root
  for (Vertex s : h.region(0).separator.vertices)
    for (Vertex v = 0; v < 9; ++v) EXPECT_EQ(h.lowest_common_region(s, v), h.root());
  // vertices split by the root separator meet at the root
  for (Vertex u = 0; u < 9; ++u) {
    for (Vertex v = 0; v < 9; ++v) {
      const RegionId r = h.lowest_common_region(u, v);
      EXPECT_TRUE(h.contains(r, u) && h.contains(r, v));
      for (RegionId c : h.region(r).children) EXPECT_FALSE(h.contains(c, u) && h.contains(c, v));
      if (h.owner(u) != 0 && h.owner(v) != 0 && h.region(h.owner(u)).depth >= 1 &&
          !h.is_ancestor_or_self(h.owner(u), h.owner(v)) && !h.is_ancestor_or_self(h.owner(v), h.owner(u))) {
        // different branches
        EXPECT_NE(r, h.owner(u));
      }
    }
  }
}

TEST(Hierarchy, EscapingPathsCrossExternalSeparators) {
  // exhaustive on a small graph: every simple path from u in R that leaves R
  // touches an external separator vertex first
  const Graph g = generate_random_planar(5, 5, 0.2, 9);
  const auto h = build_hierarchy(g);
  for (const Region& r : h.regions()) {
    if (r.depth == 0) continue;
    const auto ext = h.external_separators(r.id);
    for (Vertex u : r.members) {
      for (const Arc& a : g.neighbors(u)) {
        if (h.contains(r.id, a.to)) continue;
        EXPECT_TRUE(std::find(ext.begin(), ext.end(), h.owner(a.to)) != ext.end());
      }
    }
  }
}

TEST(Hierarchy, HeightIsLogarithmicOnGrids) {
  for (int n : {8, 16, 32}) {
    const Graph g = generate_grid(n, n);
    const auto h = build_hierarchy(g);
    const double logn = std::log2(static_cast<double>(n * n));
    EXPECT_LE(h.height(), 3.0 * logn) << n;
    RecordProperty("height_" + std::to_string(n), h.height());
  }
}

TEST(Hierarchy, DumpLoadRoundTrip) {
  const Graph g = generate_grid(6, 5);
  const auto h = build_hierarchy(g);
  std::ostringstream os;
  h.dump(os);
  std::istringstream is(os.str());
  const auto back = SeparatorHierarchy::load(is, g);
  std::ostringstream again;
  back.dump(again);
  EXPECT_EQ(os.str(), again.str());
  FileHierarchyProvider provider(os.str());
  EXPECT_EQ(provider.build(g).region_count(), h.region_count());
}

TEST(Hierarchy, LoaderRejectsViolations) {
  const Graph g = generate_grid(3, 3);
  // separator is not a shortest path (0-1-2-5-4 is longer than 0-3-4 inside the region)
  {
    std::istringstream is("0 -1 0 1 2 5 4 | 0 1 2 3 4 5 6 7 8\n");
    EXPECT_THROW(SeparatorHierarchy::load(is, g), InputError);
  }
  // a vertex on no separator
  {
    std::istringstream is("0 -1 0 1 2 | 0 1 2 3 4 5 6 7 8\n");
    EXPECT_THROW(SeparatorHierarchy::load(is, g), InputError);
  }
  // children not equal to the components
  {
    std::istringstream is(
        "0 -1 0 1 2 | 0 1 2 3 4 5 6 7 8\n"
        "1 0 3 4 5 | 3 4 5\n"
        "2 0 6 7 8 | 6 7 8\n");
    EXPECT_THROW(SeparatorHierarchy::load(is, g), InputError);
  }
  // malformed line
  {
    std::istringstream is("0 -1 0 1 2\n");
    EXPECT_THROW(SeparatorHierarchy::load(is, g), InputError);
  }
  // a valid hand-written hierarchy loads
  {
    std::istringstream is(
        "0 -1 0 1 2 | 0 1 2 3 4 5 6 7 8\n"
        "1 0 3 4 5 | 3 4 5 6 7 8\n"
        "2 1 6 7 8 | 6 7 8\n");
    EXPECT_NO_THROW(SeparatorHierarchy::load(is, g));
  }
}

TEST(Hierarchy, RequiresConnectedGraph) {
  Graph g(3);
  g.add_edge(0, 1, 1);
  EXPECT_THROW(build_hierarchy(g), PreconditionError);
}

// --- r-division -------------------------------------------------------------

void expect_division_invariants(const Graph& g, const RDivision& d) {
  std::vector<int> owner(static_cast<std::size_t>(g.edge_count()), -1);
  for (std::size_t i = 0; i < d.regions.size(); ++i) {
    for (EdgeId e : d.regions[i]) {
      EXPECT_EQ(owner[static_cast<std::size_t>(e)], -1) << "edge in two regions";
      owner[static_cast<std::size_t>(e)] = static_cast<int>(i);
    }
    EXPECT_LE(d.vertices[i].size(), static_cast<std::size_t>(d.r));
  }
  for (int o : owner) EXPECT_GE(o, 0) << "edge in no region";
  // boundary iff touched by two regions (recomputed independently)
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    std::set<int> regions;
    for (const Arc& a : g.neighbors(v)) regions.insert(owner[static_cast<std::size_t>(a.edge)]);
    EXPECT_EQ(d.is_boundary[static_cast<std::size_t>(v)] != 0, regions.size() >= 2) << v;
  }
  for (std::size_t i = 0; i < d.regions.size(); ++i)
    for (Vertex b : d.boundary[i]) EXPECT_TRUE(d.is_boundary[static_cast<std::size_t>(b)]);
}

TEST(RDivision, LargeRGivesOneRegion) {
  const Graph g = generate_grid(4, 4);
  const auto d = build_r_division(g, 16);
  ASSERT_EQ(d.regions.size(), 1u);
  EXPECT_TRUE(d.boundary[0].empty());
}

TEST(RDivision, FourByFourWithR8) {
  const Graph g = generate_grid(4, 4);
  const auto d = build_r_division(g, 8);
  expect_division_invariants(g, d);
  std::size_t edges = 0;
  for (const auto& r : d.regions) edges += r.size();
  EXPECT_EQ(edges, 24u);
}

TEST(RDivision, InvariantsOnCorpus) {
  for (int n : {8, 16, 24}) {
    for (int r : {8, 20, 64}) {
      const Graph g = generate_grid(n, n);
      const auto d = build_r_division(g, r);
      expect_division_invariants(g, d);
      // region count stays within a constant factor of n/r
      EXPECT_LE(static_cast<double>(d.regions.size()), 12.0 * n * n / r + 1) << n << " " << r;
    }
  }
  const Graph w = generate_random_planar(12, 12, 0.3, 4);
  expect_division_invariants(w, build_r_division(w, 10));
}

TEST(RDivision, RejectsTinyR) {
  EXPECT_THROW(build_r_division(generate_grid(2, 2), 1), PreconditionError);
}

}  // namespace
}  // namespace damkit
