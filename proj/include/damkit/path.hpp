#pragma once

#include <string>
#include <vector>

#include "damkit/graph.hpp"

namespace damkit {

/// Walk in a graph: consecutive vertices are adjacent. May repeat vertices.
/// A single-vertex path has no edges and length zero.
struct Path {
  std::vector<Vertex> vertices;
  PerturbedWeight length;

  bool empty() const { return vertices.empty(); }
  std::size_t edge_count() const { return vertices.empty() ? 0 : vertices.size() - 1; }
  Vertex front() const { return vertices.front(); }
  Vertex back() const { return vertices.back(); }
  std::int64_t base_length() const { return length.base(); }

  friend bool operator==(const Path& a, const Path& b) { return a.vertices == b.vertices; }
};

inline PerturbedWeight walk_length(const Graph& g, const std::vector<Vertex>& vertices) {
  PerturbedWeight total;
  for (std::size_t i = 1; i < vertices.size(); ++i) {
    auto e = g.find_edge(vertices[i - 1], vertices[i]);
    if (!e) {
      throw PreconditionError("vertices " + std::to_string(vertices[i - 1]) + " and " + std::to_string(vertices[i]) +
                              " are not adjacent");
    }
    total += g.edge_weight(*e);
  }
  return total;
}

inline std::int64_t walk_base_length(const Graph& g, const std::vector<Vertex>& vertices) {
  std::int64_t total = 0;
  for (std::size_t i = 1; i < vertices.size(); ++i) {
    auto e = g.find_edge(vertices[i - 1], vertices[i]);
    if (!e) throw PreconditionError("walk uses a non-edge");
    total += g.edge(*e).weight;
  }
  return total;
}

inline Path make_path(const Graph& g, std::vector<Vertex> vertices) {
  Path p;
  p.length = walk_length(g, vertices);
  p.vertices = std::move(vertices);
  return p;
}

inline Path reversed(Path p) {
  std::reverse(p.vertices.begin(), p.vertices.end());
  return p;
}

/// Vertex positions [from, to] of `p` (inclusive) as a new path.
inline Path subpath(const Graph& g, const Path& p, std::size_t from, std::size_t to) {
  if (from > to || to >= p.vertices.size()) throw PreconditionError("subpath range out of bounds");
  return make_path(g, std::vector<Vertex>(p.vertices.begin() + static_cast<std::ptrdiff_t>(from),
                                          p.vertices.begin() + static_cast<std::ptrdiff_t>(to) + 1));
}

/// Concatenation of walks sharing endpoints (a.back() == b.front()).
inline Path concatenate(const Path& a, const Path& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  if (a.back() != b.front()) throw PreconditionError("concatenated paths do not share an endpoint");
  Path out = a;
  out.vertices.insert(out.vertices.end(), b.vertices.begin() + 1, b.vertices.end());
  out.length += b.length;
  return out;
}

}  // namespace damkit
