#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <map>
#include <set>
#include <span>
#include <utility>
#include <vector>

#include "damkit/canonical.hpp"
#include "damkit/once_map.hpp"
#include "damkit/path.hpp"

namespace damkit {

enum class PieceKind { safe_edge, safe_subpath, unsafe_subpath };

inline const char* to_string(PieceKind k) {
  switch (k) {
    case PieceKind::safe_edge: return "safe-edge";
    case PieceKind::safe_subpath: return "safe-subpath";
    case PieceKind::unsafe_subpath: return "unsafe-subpath";
  }
  return "?";
}

/// Vertex index range [begin, end] of a detour path, end > begin.
struct Piece {
  PieceKind kind;
  std::size_t begin;
  std::size_t end;
  RegionId separator = kNoRegion;  // the region whose internal separator holds an unsafe piece
};

struct DetourResult {
  CanonicalPair pair;
  Path path;  // may repeat vertices
  std::vector<Piece> pieces;
  int iterations = 0;
  int detours = 0;  // iterations that changed the path

  std::vector<Vertex> vertices_of(const Piece& p) const {
    return {path.vertices.begin() + static_cast<std::ptrdiff_t>(p.begin),
            path.vertices.begin() + static_cast<std::ptrdiff_t>(p.end) + 1};
  }

  /// Safe(<a,b>): the safe edges and safe subpaths as vertex sequences.
  std::vector<std::vector<Vertex>> safe() const {
    std::vector<std::vector<Vertex>> out;
    for (const Piece& p : pieces)
      if (p.kind != PieceKind::unsafe_subpath) out.push_back(vertices_of(p));
    return out;
  }
};

inline std::ostream& operator<<(std::ostream& os, const DetourResult& d) {
  os << "detour " << d.pair << " length " << d.path.base_length() << " iterations " << d.iterations << '\n';
  for (const Piece& p : d.pieces) {
    os << "  " << to_string(p.kind);
    if (p.kind == PieceKind::unsafe_subpath) os << " on S" << p.separator;
    os << ':';
    for (std::size_t k = p.begin; k <= p.end; ++k) os << ' ' << d.path.vertices[k];
    os << '\n';
  }
  return os;
}

/// True when some vertex of `pi` lies within 2 * 2^scale of pair.a inside the
/// pair's region. Paths leaving the region never threaten.
inline bool threatens(const Graph& g, const SeparatorHierarchy& h, const std::vector<Vertex>& pi, const CanonicalPair& pair) {
  const RegionId r = pair.region;
  for (Vertex v : pi)
    if (!h.contains(r, v)) return false;
  auto& dj = thread_base_dijkstra();
  dj.run(g, pair.a, h.in_region(r), {kNoVertex, 2 * pow2(std::max(pair.scale, 0))});
  return std::any_of(pi.begin(), pi.end(), [&](Vertex v) { return dj.settled(v); });
}

/// Vertices of degree > 2 in the union of the two walks' edges.
inline int count_splitting_points(const std::vector<Vertex>& p1, const std::vector<Vertex>& p2) {
  std::set<std::pair<Vertex, Vertex>> edges;
  for (const auto* p : {&p1, &p2})
    for (std::size_t i = 1; i < p->size(); ++i) {
      const Vertex u = (*p)[i - 1], v = (*p)[i];
      if (u != v) edges.emplace(std::min(u, v), std::max(u, v));
    }
  std::map<Vertex, int> degree;
  for (const auto& [u, v] : edges) ++degree[u], ++degree[v];
  return static_cast<int>(std::count_if(degree.begin(), degree.end(), [](const auto& e) { return e.second > 2; }));
}

/// Detour paths for canonical pairs, memoized per ordered pair.
class DetourIndex {
 public:
  explicit DetourIndex(const CanonicalIndex& ci) : ci_(&ci) {}

  const CanonicalIndex& canonical() const { return *ci_; }

  const DetourResult& detour_path(const CanonicalPair& pair) const {
    return memo_.get({pair.a, pair.b}, [&] { return compute(pair); });
  }
  const DetourResult& detour_path(Vertex a, Vertex b) const { return detour_path(ci_->orient(a, b)); }

  std::size_t memo_size() const { return memo_.size(); }

 private:
  /// Multi-source search from an external separator S over R0 ∪ S, kept for
  /// the members of R0.
  struct Field {
    const std::vector<Vertex>* members;
    std::vector<std::int64_t> base;  // -1 when unreachable
    std::vector<Vertex> parent;
    std::vector<Vertex> source;

    std::size_t slot(Vertex v) const {
      return static_cast<std::size_t>(std::lower_bound(members->begin(), members->end(), v) - members->begin());
    }
  };

  const Field& field(RegionId r0, RegionId s) const {
    return fields_.get({r0, s}, [&] {
      const auto& h = ci_->hierarchy();
      Field f;
      f.members = &h.region(r0).members;
      const std::size_t m = f.members->size();
      f.base.assign(m, -1);
      f.parent.assign(m, kNoVertex);
      f.source.assign(m, kNoVertex);
      auto& dj = thread_perturbed_dijkstra();
      dj.run(ci_->graph(), std::span<const Vertex>(h.separator(s).vertices), h.in_region_plus(r0, s));
      for (std::size_t k = 0; k < m; ++k) {
        const Vertex v = (*f.members)[k];
        if (!dj.settled(v)) continue;
        f.base[k] = dj.base(v);
        f.parent[k] = dj.parent(v);
        f.source[k] = dj.source_of(v);
      }
      return f;
    });
  }

  DetourResult compute(const CanonicalPair& pair) const {
    const auto& g = ci_->graph();
    const auto& h = ci_->hierarchy();
    const RegionId r0 = h.owner(pair.a), rb = h.owner(pair.b);
    if (!h.is_ancestor_or_self(rb, r0)) throw PreconditionError("detour needs b on a separator of an ancestor of a's region");
    DetourResult out;
    out.pair = pair;
    auto p0 = shortest_path(g, pair.a, pair.b, h.in_region_plus(r0, rb));
    if (!p0) throw PreconditionError("pair is disconnected in its canonical subgraph");
    std::vector<Vertex> path = std::move(p0->vertices);
    const std::int64_t len0 = p0->base_length();

    // base decomposition
    std::vector<Piece> pieces;
    if (path.size() > 1) {
      if (rb == r0) {
        pieces.push_back({PieceKind::safe_subpath, 0, path.size() - 1});
      } else {
        std::size_t x = 0;
        while (h.owner(path[x]) != rb) ++x;
        if (x > 1) pieces.push_back({PieceKind::safe_subpath, 0, x - 1});
        pieces.push_back({PieceKind::safe_edge, x - 1, x});
        if (x + 1 < path.size()) pieces.push_back({PieceKind::unsafe_subpath, x, path.size() - 1, rb});
      }
    }

    // no scale runs when eps |P0| <= 1/2: the first threshold would already exceed it twice over
    const double scaled = ci_->portals().epsilon() * static_cast<double>(len0);
    const int top = scaled <= 0.0 ? -1 : static_cast<int>(std::ceil(std::log2(scaled)));
    const auto ext = h.external_separators(r0);
    for (int i = top; i >= 0; --i) {
      for (RegionId s : ext) {
        ++out.iterations;
        const Field& f = field(r0, s);
        auto near = [&](Vertex v) {
          if (!h.contains(r0, v)) return false;
          const std::int64_t d = f.base[f.slot(v)];
          return d >= 0 && d <= pow2(i);
        };
        std::size_t si = path.size(), ti = path.size();
        for (std::size_t k = 0; k < path.size(); ++k) {
          if (near(path[k])) {
            if (si == path.size()) si = k;
            ti = k;
          }
        }
        if (si == path.size()) continue;
        ++out.detours;
        auto tree_path = [&](Vertex v) {
          std::vector<Vertex> w{v};
          while (h.owner(w.back()) != s) w.push_back(f.parent[f.slot(w.back())]);
          return w;
        };
        const std::vector<Vertex> to_s = tree_path(path[si]);
        std::vector<Vertex> from_t = tree_path(path[ti]);
        std::reverse(from_t.begin(), from_t.end());
        const auto& sep = h.separator(s).vertices;
        const std::size_t ps = h.position(to_s.back()), pt = h.position(from_t.front());

        std::vector<Vertex> next(path.begin(), path.begin() + static_cast<std::ptrdiff_t>(si) + 1);
        next.insert(next.end(), to_s.begin() + 1, to_s.end());
        const std::size_t sp = next.size() - 1;  // s'
        if (ps <= pt) {
          for (std::size_t k = ps + 1; k <= pt; ++k) next.push_back(sep[k]);
        } else {
          for (std::size_t k = ps; k-- > pt;) next.push_back(sep[k]);
        }
        const std::size_t tp = next.size() - 1;  // t'
        next.insert(next.end(), from_t.begin() + 1, from_t.end());
        const std::size_t tq = next.size() - 1;  // t in the new path
        next.insert(next.end(), path.begin() + static_cast<std::ptrdiff_t>(ti) + 1, path.end());

        std::vector<Piece> np;
        for (const Piece& p : pieces) {
          if (p.end <= si) {
            np.push_back(p);
          } else if (p.begin < si) {
            Piece q = p;
            q.end = si;
            np.push_back(q);
          }
        }
        if (sp - 1 > si) np.push_back({PieceKind::safe_subpath, si, sp - 1});
        np.push_back({PieceKind::safe_edge, sp - 1, sp});
        if (tp > sp) np.push_back({PieceKind::unsafe_subpath, sp, tp, s});
        np.push_back({PieceKind::safe_edge, tp, tp + 1});
        if (tq > tp + 1) np.push_back({PieceKind::safe_subpath, tp + 1, tq});
        const std::ptrdiff_t shift = static_cast<std::ptrdiff_t>(tq) - static_cast<std::ptrdiff_t>(ti);
        auto moved = [&](std::size_t k) { return static_cast<std::size_t>(static_cast<std::ptrdiff_t>(k) + shift); };
        for (const Piece& p : pieces) {
          if (p.begin >= ti) {
            np.push_back({p.kind, moved(p.begin), moved(p.end), p.separator});
          } else if (p.end > ti) {
            np.push_back({p.kind, tq, moved(p.end), p.separator});
          }
        }
        path = std::move(next);
        pieces = std::move(np);
      }
    }
    out.path = make_path(g, std::move(path));
    out.pieces = std::move(pieces);
    return out;
  }

  const CanonicalIndex* ci_;
  mutable OnceMap<std::pair<Vertex, Vertex>, DetourResult> memo_;
  mutable OnceMap<std::pair<RegionId, RegionId>, Field> fields_;
};

}  // namespace damkit
