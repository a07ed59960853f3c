#include <gtest/gtest.h>

#include <map>
#include <set>

#include "damkit/dam.hpp"
#include "damkit/generators.hpp"
#include "test_support.hpp"

namespace damkit {
namespace {

using Matrix = std::vector<std::vector<std::optional<std::int64_t>>>;

Matrix oracle(const Graph& g, const std::vector<Vertex>& terminals) {
  const auto fw = testing::floyd_warshall(g);
  Matrix out;
  for (Vertex s : terminals) {
    auto& row = out.emplace_back();
    for (Vertex t : terminals) row.push_back(fw[static_cast<std::size_t>(s)][static_cast<std::size_t>(t)]);
  }
  return out;
}

// Terminal distances in a chain graph via Floyd-Warshall on its own edges.
Matrix sketch_oracle(const ChainGraph& cg, const std::vector<Vertex>& terminals) {
  std::map<Vertex, std::size_t> at;
  for (Vertex v : cg.vertices) at.emplace(v, at.size());
  Graph local(static_cast<Vertex>(at.size()));
  std::map<std::pair<std::size_t, std::size_t>, std::int64_t> best;
  for (const ChainEdge& e : cg.edges) {
    auto k = std::minmax(at.at(e.u), at.at(e.v));
    auto [it, fresh] = best.emplace(std::pair(k.first, k.second), e.weight);
    if (!fresh) it->second = std::min(it->second, e.weight);
  }
  for (const auto& [k, w] : best) local.add_edge(static_cast<Vertex>(k.first), static_cast<Vertex>(k.second), w);
  std::vector<Vertex> lt;
  for (Vertex t : terminals) lt.push_back(static_cast<Vertex>(at.at(t)));
  return oracle(local, lt);
}

void expect_sandwich(const Matrix& g, const Matrix& s, double stretch) {
  ASSERT_EQ(g.size(), s.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t j = 0; j < g.size(); ++j) {
      ASSERT_EQ(g[i][j].has_value(), s[i][j].has_value()) << i << "," << j;
      if (!g[i][j]) continue;
      EXPECT_GE(*s[i][j], *g[i][j]) << i << "," << j;
      EXPECT_LE(static_cast<double>(*s[i][j]), stretch * static_cast<double>(*g[i][j]) + 1e-9) << i << "," << j;
    }
  }
}

// Minor structure, checked directly against G.
void expect_minor(const Graph& g, const Dam& d) {
  std::set<Vertex> vs(d.minor.vertices.begin(), d.minor.vertices.end());
  for (Vertex t : d.terminals) EXPECT_TRUE(vs.count(t)) << "terminal " << t;
  std::map<Vertex, int> degree;
  std::set<EdgeId> used;
  for (const ChainEdge& e : d.minor.edges) {
    ++degree[e.u], ++degree[e.v];
    ASSERT_GE(e.chain.size(), 2u);
    EXPECT_EQ(e.chain.front(), e.u);
    EXPECT_EQ(e.chain.back(), e.v);
    std::int64_t len = 0;
    for (std::size_t k = 1; k < e.chain.size(); ++k) {
      const auto id = g.find_edge(e.chain[k - 1], e.chain[k]);
      ASSERT_TRUE(id) << "foreign edge " << e.chain[k - 1] << "-" << e.chain[k];
      len += g.edge(*id).weight;
      used.insert(*id);
    }
    EXPECT_EQ(len, e.weight);
  }
  for (const auto& [v, deg] : degree) {
    if (deg == 2) {
      EXPECT_TRUE(std::binary_search(d.terminals.begin(), d.terminals.end(), v)) << "degree-2 " << v;
    }
  }
  for (EdgeId e : used) EXPECT_TRUE(std::binary_search(d.overlay.begin(), d.overlay.end(), e));
}

TEST(Contract, PathCollapsesToOneEdge) {
  const std::vector<ChainEdge> m{{0, 1, 1, {0, 1}}, {1, 2, 2, {1, 2}}};
  const std::vector<Vertex> t{0, 2};
  const auto c = contract_degree2(m, t);
  EXPECT_EQ(c.vertices, (std::vector<Vertex>{0, 2}));
  ASSERT_EQ(c.edges.size(), 1u);
  EXPECT_EQ(c.edges[0].weight, 3);
  EXPECT_EQ(c.edges[0].chain, (std::vector<Vertex>{0, 1, 2}));
}

TEST(Contract, CycleWithOneTerminalKeepsTheTerminal) {
  // 0-1-2-3-0 with terminal 0: the chain closes on itself and the loop drops
  const std::vector<ChainEdge> m{{0, 1, 1, {}}, {1, 2, 1, {}}, {2, 3, 1, {}}, {0, 3, 1, {}}};
  const std::vector<Vertex> t{0};
  const auto c = contract_degree2(m, t);
  EXPECT_EQ(c.vertices, (std::vector<Vertex>{0}));
  EXPECT_TRUE(c.edges.empty());
}

TEST(Contract, CycleWithTwoTerminalsKeepsLighterSide) {
  const std::vector<ChainEdge> m{{0, 1, 1, {}}, {1, 2, 1, {}}, {2, 3, 5, {}}, {0, 3, 1, {}}};
  const std::vector<Vertex> t{0, 2};
  const auto c = contract_degree2(m, t);
  ASSERT_EQ(c.edges.size(), 1u);
  EXPECT_EQ(c.edges[0].weight, 2);
  EXPECT_EQ(c.edges[0].chain, (std::vector<Vertex>{0, 1, 2}));
}

TEST(Contract, StarIsUnchanged) {
  const std::vector<ChainEdge> m{{0, 1, 1, {}}, {0, 2, 2, {}}, {0, 3, 3, {}}};
  const std::vector<Vertex> t{1, 2, 3};
  const auto c = contract_degree2(m, t);
  EXPECT_EQ(c.vertices, (std::vector<Vertex>{0, 1, 2, 3}));
  EXPECT_EQ(c.edges.size(), 3u);
}

TEST(Contract, DanglingNonTerminalsArePruned) {
  // 0-1-2 with a pendant 1-3 and 3-4: 3 and 4 lead nowhere
  const std::vector<ChainEdge> m{{0, 1, 1, {}}, {1, 2, 1, {}}, {1, 3, 1, {}}, {3, 4, 1, {}}};
  const std::vector<Vertex> t{0, 2};
  const auto c = contract_degree2(m, t);
  EXPECT_EQ(c.vertices, (std::vector<Vertex>{0, 2}));
  ASSERT_EQ(c.edges.size(), 1u);
  EXPECT_EQ(c.edges[0].weight, 2);
}

TEST(Contract, IdempotentAndPreservesTerminalMetric) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Graph g = generate_random_planar(6, 6, 0.3, seed);
    const auto t = random_terminals(g, 5, seed);
    const ChainGraph full = chain_graph_of(g);
    const ChainGraph once = contract_degree2(full.edges, t);
    EXPECT_EQ(contract_degree2(once.edges, t), once) << seed;
    std::vector<Vertex> sorted = t;
    std::sort(sorted.begin(), sorted.end());
    EXPECT_EQ(sketch_oracle(once, sorted), oracle(g, sorted)) << seed;
  }
}

TEST(Dam, SingleEdge) {
  Graph g(2);
  g.add_edge(0, 1, 7);
  const auto d = build_dam(g, {0, 1});
  ASSERT_EQ(d.minor.edges.size(), 1u);
  EXPECT_EQ(d.minor.edges[0].weight, 7);
  EXPECT_EQ(d.overlay, (std::vector<EdgeId>{0}));
  expect_minor(g, d);
}

TEST(Dam, SingleTerminal) {
  const Graph g = generate_grid(4, 4);
  const auto d = build_dam(g, {5});
  EXPECT_EQ(d.minor.vertices, (std::vector<Vertex>{5}));
  EXPECT_TRUE(d.minor.edges.empty());
}

TEST(Dam, RejectsBadInput) {
  const Graph g = generate_grid(3, 3);
  EXPECT_THROW(build_dam(g, {}), PreconditionError);
  EXPECT_THROW(build_dam(g, {0, 9}), PreconditionError);
  EXPECT_THROW(build_dam(g, {0, 1}, {1.5}), PreconditionError);
  EXPECT_THROW(build_dam(g, {0, 1}, {0.0}), PreconditionError);
  EXPECT_THROW(build_emulator(g, {0, 1}, 1.0), PreconditionError);
}

TEST(Dam, GridCornersWithinStretch) {
  const Graph g = generate_grid(8, 8);
  const std::vector<Vertex> corners{0, 7, 56, 63};
  const auto d = build_dam(g, corners, {0.5});
  expect_sandwich(oracle(g, corners), sketch_oracle(d.minor, corners), 1.5);
  expect_minor(g, d);
}

TEST(Dam, DisconnectedGraphIsBuiltPerComponent) {
  Graph g(8);
  for (Vertex v = 0; v + 1 < 4; ++v) g.add_edge(v, v + 1, 2);
  for (Vertex v = 4; v + 1 < 8; ++v) g.add_edge(v, v + 1, 3);
  const std::vector<Vertex> t{0, 3, 4, 7};
  const auto d = build_dam(g, t);
  expect_sandwich(oracle(g, t), sketch_oracle(d.minor, t), 1.0);
  expect_minor(g, d);
}

TEST(Dam, SizeAccounting) {
  const Graph g = generate_grid(10, 10, WeightMode::random, 4);
  const auto t = random_terminals(g, 6, 2);
  const auto d = build_dam(g, t);
  EXPECT_LE(d.minor.vertex_count(), d.stats.endpoints + 2 * d.stats.splitting_points + d.terminals.size());
  EXPECT_GT(d.stats.rel_pairs, 0u);
  EXPECT_GE(d.stats.proxy_pairs, 1u);
}

TEST(Dam, ContextIsReusableAcrossTerminalSets) {
  const Graph g = generate_grid(8, 8, WeightMode::random, 9);
  const DamContext ctx(g, 0.5, kDefaultCScale);
  const auto a = random_terminals(g, 4, 1), b = random_terminals(g, 4, 2);
  const auto da = build_dam(ctx, a), db = build_dam(ctx, b);
  EXPECT_EQ(build_dam(ctx, a).minor, da.minor);
  EXPECT_EQ(build_dam(g, b).minor, db.minor);
}

TEST(Dam, ThreadCountDoesNotChangeTheResult) {
  const Graph g = generate_grid(9, 9, WeightMode::random, 3);
  const auto t = random_terminals(g, 6, 3);
  DamOptions one, four;
  one.threads = 1;
  four.threads = 4;
  EXPECT_EQ(build_dam(g, t, one).minor, build_dam(g, t, four).minor);
}

class DamCorpus : public ::testing::TestWithParam<std::tuple<int, int>> {};

TEST_P(DamCorpus, SandwichStretchAndMinor) {
  const auto [seed, count] = GetParam();
  const Graph g = seed == 0 ? generate_grid(9, 9) : generate_grid(9, 9, WeightMode::random, static_cast<std::uint64_t>(seed));
  auto t = random_terminals(g, static_cast<std::size_t>(count), static_cast<std::uint64_t>(seed) + 11);
  std::sort(t.begin(), t.end());
  const auto want = oracle(g, t);
  SCOPED_TRACE("dam");
  const auto d = build_dam(g, t, {0.5});
  expect_sandwich(want, sketch_oracle(d.minor, t), 1.5);
  expect_minor(g, d);
  SCOPED_TRACE("fast");
  const auto f = build_dam_fast(g, t, {0.5});
  expect_sandwich(want, sketch_oracle(f.minor, t), 1.5);
  expect_minor(g, f);
  SCOPED_TRACE("overlay");
  const auto o = build_overlay_baseline(g, t, 0.5);
  expect_sandwich(want, sketch_oracle(o.minor, t), 1.5);
  expect_minor(g, o);
  SCOPED_TRACE("emulator");
  const auto e = build_emulator(g, t, 0.5);
  expect_sandwich(want, sketch_oracle(e.minor, t), 1.5);
}

INSTANTIATE_TEST_SUITE_P(Grids, DamCorpus, ::testing::Combine(::testing::Values(0, 1, 2), ::testing::Values(2, 5)));

TEST(Emulator, SingleEdge) {
  Graph g(2);
  g.add_edge(0, 1, 1);
  const auto e = build_emulator(g, {0, 1}, 0.5);
  ASSERT_EQ(e.minor.edges.size(), 1u);
  EXPECT_EQ(e.minor.edges[0].weight, 1);
}

TEST(Emulator, EightRandomTerminals) {
  const Graph g = generate_grid(8, 8);
  auto t = random_terminals(g, 8, 17);
  std::sort(t.begin(), t.end());
  const auto e = build_emulator(g, t, 0.5);
  expect_sandwich(oracle(g, t), sketch_oracle(e.minor, t), 1.5);
  // size relative to |T| eps^-1 h (scales)
  const double eps = e.stats.epsilon;
  const double budget = static_cast<double>(t.size()) / eps * e.stats.height * (ceil_log2(e.stats.distance_bound) + 1);
  const double c = static_cast<double>(e.minor.edge_count()) / budget;
  EXPECT_LT(c, 1.0);
  RecordProperty("emulator_size_c", std::to_string(c));
}

TEST(Overlay, SingleEdgeMatchesDam) {
  Graph g(2);
  g.add_edge(0, 1, 4);
  EXPECT_EQ(build_overlay_baseline(g, {0, 1}, 0.5).minor, build_dam(g, {0, 1}).minor);
}

TEST(Fast, SmallInputIsItsOwnSketch) {
  const Graph g = generate_grid(5, 5, WeightMode::random, 2);
  const std::vector<Vertex> t{0, 24};
  const auto f = build_dam_fast(g, t);
  ASSERT_EQ(f.stats.round_vertices.size(), 1u);
  EXPECT_EQ(f.minor, contract_degree2(chain_graph_of(g).edges, t));
  expect_sandwich(oracle(g, t), sketch_oracle(f.minor, t), 1.0);
}

TEST(Fast, RoundsShrinkUntilTheGuard) {
  const Graph g = generate_grid(16, 16);
  const std::vector<Vertex> t{0, 15, 240, 255};
  const auto f = build_dam_fast(g, t, {0.5});
  const auto& rounds = f.stats.round_vertices;
  for (std::size_t i = 1; i < rounds.size(); ++i) EXPECT_LT(rounds[i], rounds[i - 1]);
  EXPECT_LT(rounds.back(), 4u * static_cast<std::size_t>(kDefaultKappa) * t.size());
  expect_sandwich(oracle(g, t), sketch_oracle(f.minor, t), 1.5);
  expect_minor(g, f);
}

TEST(Fast, SmallKappaRunsThePlannedRounds) {
  const Graph g = generate_grid(16, 16);
  const std::vector<Vertex> t{0, 15, 240, 255};
  FastOptions opt;
  opt.kappa = 4;  // guard 64: two planned rounds over 256 vertices
  const auto f = build_dam_fast(g, t, opt);
  const auto& rounds = f.stats.round_vertices;
  ASSERT_EQ(rounds.size(), 3u);
  for (std::size_t i = 1; i < rounds.size(); ++i) EXPECT_LT(rounds[i], rounds[i - 1]);
  EXPECT_DOUBLE_EQ(f.stats.epsilon, 0.5 / (2 * 2));
  expect_sandwich(oracle(g, t), sketch_oracle(f.minor, t), 1.5);
  expect_minor(g, f);
}

TEST(Fast, PiecesAcrossSeveralRegions) {
  const Graph g = generate_grid(12, 12, WeightMode::random, 5);
  auto t = random_terminals(g, 3, 8);
  std::sort(t.begin(), t.end());
  FastOptions opt;
  opt.kappa = 2;
  opt.r = 40;
  const auto f = build_dam_fast(g, t, opt);
  EXPECT_GE(f.stats.round_vertices.size(), 2u);
  expect_sandwich(oracle(g, t), sketch_oracle(f.minor, t), 1.5);
  expect_minor(g, f);
}

TEST(Fast, DefaultKappaMatchesCalibration) { EXPECT_EQ(calibrate_kappa(), kDefaultKappa); }

}  // namespace
}  // namespace damkit
