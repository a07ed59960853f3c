#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "damkit/generators.hpp"
#include "damkit/verify.hpp"
#include "test_support.hpp"

namespace damkit {
namespace {

TEST(Oracle, SingleEdge) {
  Graph g(2);
  g.add_edge(0, 1, 5);
  const auto d = brute_force_distances(g, {0, 1});
  EXPECT_EQ(d.d[0][0], 0);
  EXPECT_EQ(d.d[0][1], 5);
  EXPECT_EQ(d.d[1][0], 5);
}

TEST(Oracle, CrossComponentPairIsAbsent) {
  Graph g(4);
  g.add_edge(0, 1, 1);
  g.add_edge(2, 3, 1);
  const auto d = brute_force_distances(g, {0, 2});
  EXPECT_FALSE(d.d[0][1].has_value());
}

TEST(Oracle, GridCorners) {
  const Graph g = generate_grid(3, 3);
  const auto d = brute_force_distances(g, {0, 2, 6, 8});
  EXPECT_EQ(d.d[0][1], 2);
  EXPECT_EQ(d.d[0][2], 2);
  EXPECT_EQ(d.d[0][3], 4);
  EXPECT_EQ(d.d[1][2], 4);
}

TEST(Oracle, AgreesWithFloydWarshallAndShortestPath) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Graph g = generate_random_connected(30, 25, 20, seed);
    const auto t = random_terminals(g, 6, seed);
    const auto fw = testing::floyd_warshall(g);
    const auto d = brute_force_distances(g, t, 3);
    for (std::size_t i = 0; i < t.size(); ++i) {
      for (std::size_t j = 0; j < t.size(); ++j) {
        EXPECT_EQ(d.d[i][j], fw[static_cast<std::size_t>(t[i])][static_cast<std::size_t>(t[j])]);
        EXPECT_EQ(*d.d[i][j], shortest_path(g, t[i], t[j])->base_length());
      }
    }
  }
}

TEST(Stretch, GraphAgainstItselfIsExact) {
  const Graph g = generate_grid(5, 5, WeightMode::random, 3);
  const std::vector<Vertex> t{0, 7, 12, 24};
  const auto r = measure_stretch(sketch_distances(chain_graph_of(g), t), brute_force_distances(g, t));
  EXPECT_EQ(r.pairs.size(), 6u);
  EXPECT_DOUBLE_EQ(r.max_ratio, 1.0);
  EXPECT_FALSE(r.hard_failure());
  for (const auto& p : r.pairs) EXPECT_DOUBLE_EQ(p.ratio, 1.0);
}

TEST(Stretch, MissingTerminalIsAnError) {
  const Graph g = generate_grid(3, 3);
  ChainGraph sketch = chain_graph_of(g);
  sketch.vertices.erase(sketch.vertices.begin() + 8);
  sketch.edges.erase(std::remove_if(sketch.edges.begin(), sketch.edges.end(), [](const ChainEdge& e) { return e.v == 8; }),
                     sketch.edges.end());
  EXPECT_THROW(sketch_distances(sketch, {0, 8}), PreconditionError);
  const TerminalDistances a{{0, 8}, {{0, 4}, {4, 0}}}, b{{0, 7}, {{0, 3}, {3, 0}}};
  EXPECT_THROW(measure_stretch(a, b), PreconditionError);
}

TEST(Stretch, ShorterSketchIsAHardFailure) {
  const TerminalDistances oracle{{0, 1, 2}, {{0, 4, 6}, {4, 0, 2}, {6, 2, 0}}};
  const TerminalDistances sketch{{0, 1, 2}, {{0, 5, 5}, {5, 0, 2}, {5, 2, 0}}};
  const auto r = measure_stretch(sketch, oracle);
  ASSERT_TRUE(r.hard_failure());
  ASSERT_EQ(r.below_one.size(), 1u);
  EXPECT_EQ(r.below_one[0].s, 0);
  EXPECT_EQ(r.below_one[0].t, 2);
  EXPECT_DOUBLE_EQ(r.max_ratio, 1.25);
  EXPECT_EQ(r.above(1.2).size(), 1u);
}

TEST(Stretch, DamOnGridCornersMeetsTheBound) {
  const Graph g = generate_grid(8, 8);
  const auto d = build_dam(g, {0, 7, 56, 63}, {0.5});
  const auto r = measure_stretch(g, d);
  EXPECT_FALSE(r.hard_failure());
  EXPECT_LE(r.max_ratio, 1.5);
  std::ostringstream csv, text;
  write_stretch_csv(csv, r, g.unit());
  write_stretch_summary(text, r, 1.5);
  EXPECT_EQ(csv.str().substr(0, 22), "s,t,graph,sketch,ratio");
  EXPECT_NE(text.str().find("OK"), std::string::npos);
}

struct Hier {
  Graph g;
  SeparatorHierarchy h;
  explicit Hier(Graph graph) : g(std::move(graph)), h(build_hierarchy(g)) {}
};

TEST(DomainReplacement, EmptySetLeavesThePath) {
  const Hier f(generate_grid(5, 5));
  const std::vector<Vertex> p{0, 1, 2, 7, 12};
  EXPECT_EQ(domain_replacement(f.g, f.h, p, {}, 0), p);
}

TEST(DomainReplacement, WholePathBecomesRegionShortestPath) {
  const Hier f(generate_grid(6, 6, WeightMode::random, 2));
  const RegionId r = f.h.region(0).children.front();
  const auto& m = f.h.region(r).members;
  const Vertex a = m.front(), b = m.back();
  // a detour through the root separator and back
  auto walk = shortest_path(f.g, a, f.h.separator(0).vertices.front())->vertices;
  const auto back = shortest_path(f.g, f.h.separator(0).vertices.front(), b)->vertices;
  walk.insert(walk.end(), back.begin() + 1, back.end());
  const auto out = domain_replacement(f.g, f.h, walk, {{0, walk.size() - 1}}, r);
  EXPECT_EQ(out, shortest_path(f.g, a, b, f.h.in_region(r))->vertices);
}

TEST(DomainReplacement, OverlapIsRejected) {
  const Hier f(generate_grid(4, 4));
  const std::vector<Vertex> p{0, 1, 2, 3, 7};
  EXPECT_THROW(domain_replacement(f.g, f.h, p, {{0, 2}, {1, 3}}, 0), PreconditionError);
  EXPECT_THROW(domain_replacement(f.g, f.h, p, {{2, 2}}, 0), PreconditionError);
  EXPECT_NO_THROW(domain_replacement(f.g, f.h, p, {{0, 2}, {2, 4}}, 0));
}

// Replacing random edge-disjoint subpaths of a detour path keeps it within
// (1 + 4 k eps) of the canonical distance, k the iteration count.
TEST(DomainReplacement, DetourReplacementStretch) {
  const Graph g = generate_grid(8, 8, WeightMode::random, 6);
  const auto h = build_hierarchy(g);
  const PortalIndex pi(g, h, 0.1, scale_bound(g));
  const CanonicalIndex ci(g, h, pi);
  const DetourIndex di(ci);
  std::mt19937_64 rng(5);
  int checked = 0;
  for (Vertex t : random_terminals(g, 3, 4)) {
    for (const auto& pair : ci.rel_pairs(t)) {
      const auto& d = di.detour_path(pair);
      const auto& p = d.path.vertices;
      if (p.size() < 3) continue;
      std::vector<std::pair<std::size_t, std::size_t>> xs;
      for (std::size_t at = 0; at + 1 < p.size();) {
        const std::size_t len = std::uniform_int_distribution<std::size_t>(1, p.size() - 1 - at)(rng);
        if (rng() % 2) xs.emplace_back(at, at + len);
        at += len;
      }
      const auto out = domain_replacement(g, h, p, xs, pair.region);
      const double bound = (1 + 4 * d.iterations * pi.epsilon()) * static_cast<double>(pair.distance);
      EXPECT_LE(static_cast<double>(walk_base_length(g, out)), bound + 1e-9) << pair;
      ++checked;
    }
  }
  EXPECT_GT(checked, 0);
}

TEST(VerifyMinor, BuiltDamPasses) {
  const Graph g = generate_grid(9, 9, WeightMode::random, 2);
  const auto t = random_terminals(g, 5, 3);
  for (const Dam& d : {build_dam(g, t), build_dam_fast(g, t), build_overlay_baseline(g, t, 0.5)}) {
    const auto rep = verify_minor(d, g);
    EXPECT_TRUE(rep.ok()) << (rep.problems.empty() ? "" : rep.problems.front());
  }
}

TEST(VerifyMinor, ForeignEdgeIsNamed) {
  const Graph g = generate_grid(6, 6);
  Dam d = build_dam(g, {0, 35, 5});
  ASSERT_FALSE(d.minor.edges.empty());
  auto& chain = d.minor.edges.front().chain;
  ASSERT_GE(chain.size(), 3u);
  // swap an interior vertex for one not adjacent to its neighbours
  const Vertex bad = chain[1] == 14 ? 21 : 14;
  const Vertex prev = chain[0];
  chain[1] = bad;
  const auto rep = verify_minor(d, g);
  EXPECT_FALSE(rep.ok());
  ASSERT_FALSE(rep.foreign_edges.empty());
  EXPECT_EQ(rep.foreign_edges.front(), std::make_pair(prev, bad));
}

TEST(VerifyMinor, InjectedDegreeTwoVertexFails) {
  const Graph g = generate_grid(6, 6);
  Dam d = build_dam(g, {0, 35, 5});
  // split the first chain at an interior vertex
  ChainEdge e = d.minor.edges.front();
  ASSERT_GE(e.chain.size(), 3u);
  const Vertex mid = e.chain[1];
  ChainEdge left{e.u, mid, g.edge(*g.find_edge(e.chain[0], mid)).weight, {e.chain[0], mid}};
  ChainEdge right{std::min(mid, e.v), std::max(mid, e.v), e.weight - left.weight, {e.chain.begin() + 1, e.chain.end()}};
  if (right.u != mid) std::reverse(right.chain.begin(), right.chain.end());
  d.minor.edges.erase(d.minor.edges.begin());
  d.minor.edges.push_back(left);
  d.minor.edges.push_back(right);
  d.minor.vertices.push_back(mid);
  std::sort(d.minor.vertices.begin(), d.minor.vertices.end());
  const auto rep = verify_minor(d, g);
  EXPECT_FALSE(rep.ok());
  bool named = false;
  for (const auto& p : rep.problems) named = named || p == "non-terminal " + std::to_string(mid) + " has degree 2";
  EXPECT_TRUE(named);
}

TEST(VerifyMinor, MissingTerminalFails) {
  const Graph g = generate_grid(4, 4);
  Dam d = build_dam(g, {0, 15});
  d.terminals.push_back(20);
  EXPECT_FALSE(verify_minor(d, g).ok());
}

TEST(Ledger, ReadAndDrift) {
  std::istringstream is("# name value\nproxy_c 0.5\nsplits_c 2\n");
  const auto m = read_constants_ledger(is);
  ASSERT_EQ(m.size(), 2u);
  EXPECT_DOUBLE_EQ(m.at("proxy_c"), 0.5);
  EXPECT_FALSE(drifted(0.9, m.at("proxy_c")));
  EXPECT_TRUE(drifted(1.1, m.at("proxy_c")));
}

}  // namespace
}  // namespace damkit
