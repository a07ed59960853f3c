#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "damkit/graph.hpp"

namespace damkit {

enum class WeightMode { unit, random };

inline constexpr std::int64_t kMaxGeneratedVertices = std::int64_t{1} << 24;

inline Vertex grid_vertex(int w, int x, int y) { return static_cast<Vertex>(y * w + x); }

/// w x h grid with 4-neighbour adjacency; vertex (x, y) has id y*w + x.
/// Random weights are integers in [1, 9] drawn from `seed`.
inline Graph generate_grid(int w, int h, WeightMode mode = WeightMode::unit, std::uint64_t seed = 1) {
  if (w < 1 || h < 1) throw PreconditionError("grid dimensions must be positive");
  if (static_cast<std::int64_t>(w) * h > kMaxGeneratedVertices) throw PreconditionError("grid too large");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> weight(1, 9);
  Graph g(static_cast<Vertex>(w * h));
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (x + 1 < w) g.add_edge(grid_vertex(w, x, y), grid_vertex(w, x + 1, y), mode == WeightMode::unit ? 1 : weight(rng));
      if (y + 1 < h) g.add_edge(grid_vertex(w, x, y), grid_vertex(w, x, y + 1), mode == WeightMode::unit ? 1 : weight(rng));
    }
  }
  return g.normalized();
}

struct Instance {
  Graph graph;
  std::vector<Vertex> terminals;
};

/// The crossing-paths family: a unit grid of width k^2 and height 2k+2.
///   a_j = (j*k + k/2, 0)        for j = 0..k-1   (top row)
///   c_i = (0, i), d_i = (k^2-1, i) for i = 1..k   (strip between the rows)
///   b_j = (j*k + k/2, k+1)      for j = 0..k-1   (middle row)
/// Shortest a_j-b_j paths run vertically and every c_i-d_i path runs across
/// them, so exact path overlays have about k^2 crossings for 4k terminals.
inline Instance generate_badgrid(int k) {
  if (k < 2) throw PreconditionError("badgrid needs k >= 2");
  const int w = k * k;
  const int h = 2 * k + 2;
  Instance inst{generate_grid(w, h), {}};
  for (int j = 0; j < k; ++j) inst.terminals.push_back(grid_vertex(w, j * k + k / 2, 0));
  for (int i = 1; i <= k; ++i) inst.terminals.push_back(grid_vertex(w, 0, i));
  for (int i = 1; i <= k; ++i) inst.terminals.push_back(grid_vertex(w, w - 1, i));
  for (int j = 0; j < k; ++j) inst.terminals.push_back(grid_vertex(w, j * k + k / 2, k + 1));
  return inst;
}

/// Random-weight grid with edges dropped at rate `drop` while keeping the
/// graph connected (a random spanning tree is always kept).
inline Graph generate_random_planar(int w, int h, double drop, std::uint64_t seed) {
  const Graph full = generate_grid(w, h, WeightMode::random, seed);
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<EdgeId> order(static_cast<std::size_t>(full.edge_count()));
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<Vertex> parent(static_cast<std::size_t>(full.vertex_count()));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](Vertex v) {
    while (parent[static_cast<std::size_t>(v)] != v) {
      parent[static_cast<std::size_t>(v)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
      v = parent[static_cast<std::size_t>(v)];
    }
    return v;
  };
  std::vector<char> keep(order.size(), 0);
  for (EdgeId e : order) {
    const Vertex a = find(full.edge(e).u), b = find(full.edge(e).v);
    if (a != b) {
      parent[static_cast<std::size_t>(a)] = b;
      keep[static_cast<std::size_t>(e)] = 1;
    }
  }
  std::bernoulli_distribution dropped(drop);
  Graph g(full.vertex_count());
  for (EdgeId e = 0; e < full.edge_count(); ++e) {
    const bool k = keep[static_cast<std::size_t>(e)] || !dropped(rng);
    if (k) g.add_edge(full.edge(e).u, full.edge(e).v, full.edge(e).weight);
  }
  g.set_unit(full.unit());
  return g.normalized();
}

/// `count` distinct vertices drawn uniformly with `seed`, sorted.
inline std::vector<Vertex> random_terminals(const Graph& g, std::size_t count, std::uint64_t seed) {
  if (count > static_cast<std::size_t>(g.vertex_count())) throw PreconditionError("more terminals than vertices");
  std::vector<Vertex> all(static_cast<std::size_t>(g.vertex_count()));
  std::iota(all.begin(), all.end(), 0);
  std::mt19937_64 rng(seed);
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(count);
  std::sort(all.begin(), all.end());
  return all;
}

/// Random connected simple graph: a random tree plus `extra` random edges,
/// weights in [1, max_weight].
inline Graph generate_random_connected(Vertex n, int extra, int max_weight, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> weight(1, max_weight);
  Graph g(n);
  for (Vertex v = 1; v < n; ++v) {
    std::uniform_int_distribution<Vertex> pick(0, v - 1);
    g.add_edge(pick(rng), v, weight(rng));
  }
  if (n >= 2) {
    std::uniform_int_distribution<Vertex> any(0, n - 1);
    for (int tries = 0, added = 0; added < extra && tries < 50 * (extra + 1); ++tries) {
      const Vertex u = any(rng), v = any(rng);
      if (u == v || g.find_edge(u, v)) continue;
      g.add_edge(u, v, weight(rng));
      ++added;
    }
  }
  return g.normalized();
}

}  // namespace damkit
