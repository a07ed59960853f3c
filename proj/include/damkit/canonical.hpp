#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <ostream>
#include <utility>
#include <vector>

#include "damkit/graph.hpp"
#include "damkit/hierarchy.hpp"
#include "damkit/once_map.hpp"
#include "damkit/portals.hpp"
#include "damkit/shortest_path.hpp"

namespace damkit {

/// Ordered portal pair <a, b>: `a` on the internal separator of `region`, `b`
/// on the internal separator of `b_region` (the region itself or an ancestor).
/// The canonical subgraph is region ∪ S_b. `scale` is the smallest scale at
/// which both are portals within distance 2^scale there; -1 marks a pair that
/// is not canonical at any scale.
struct CanonicalPair {
  Vertex a = kNoVertex;
  Vertex b = kNoVertex;
  int scale = -1;
  RegionId region = kNoRegion;
  RegionId b_region = kNoRegion;
  std::int64_t distance = 0;  // base distance in the canonical subgraph

  bool valid() const { return scale >= 0; }

  friend bool operator==(const CanonicalPair& x, const CanonicalPair& y) { return x.a == y.a && x.b == y.b; }
  friend auto operator<=>(const CanonicalPair& x, const CanonicalPair& y) {
    return std::pair(x.a, x.b) <=> std::pair(y.a, y.b);
  }
  friend std::ostream& operator<<(std::ostream& os, const CanonicalPair& p) {
    return os << '<' << p.a << ',' << p.b << "> scale " << p.scale << " region " << p.region;
  }
};

/// p1 ⪯ p2: p2 lives in a proper ancestor region, or in the same region at a
/// scale no smaller.
inline bool pair_order_leq(const SeparatorHierarchy& h, const CanonicalPair& p1, const CanonicalPair& p2) {
  if (h.is_proper_ancestor(p2.region, p1.region)) return true;
  return p1.region == p2.region && p1.scale <= p2.scale;
}

struct CanonicalSequence {
  std::vector<Vertex> vertices;
  std::vector<CanonicalPair> pairs;  // one per step, oriented descendant-first
  std::vector<std::int64_t> steps;   // base distance of each step in its canonical subgraph

  std::int64_t total() const {
    std::int64_t t = 0;
    for (auto s : steps) t += s;
    return t;
  }
  bool all_valid() const {
    return std::all_of(pairs.begin(), pairs.end(), [](const CanonicalPair& p) { return p.valid(); });
  }
};

/// Canonical pairs, relevant portal sets and canonical sequences over a fixed
/// hierarchy and portal index. Queries are memoized and thread-safe.
class CanonicalIndex {
 public:
  CanonicalIndex(const Graph& g, const SeparatorHierarchy& h, const PortalIndex& portals)
      : g_(&g), h_(&h), portals_(&portals) {}

  const Graph& graph() const { return *g_; }
  const SeparatorHierarchy& hierarchy() const { return *h_; }
  const PortalIndex& portals() const { return *portals_; }

  /// Base distance between a and b in owner(a) ∪ S_{owner(b)}, or nullopt when
  /// above `radius` or unreachable. Requires owner(b) to be an ancestor-or-self
  /// of owner(a).
  std::optional<std::int64_t> canonical_distance(Vertex a, Vertex b, std::int64_t radius = kNoRadius) const {
    const RegionId ra = h_->owner(a), rb = h_->owner(b);
    if (!h_->is_ancestor_or_self(rb, ra)) throw PreconditionError("b must lie on a separator of an ancestor of a's region");
    auto& dj = thread_base_dijkstra();
    dj.run(*g_, a, h_->in_region_plus(ra, rb), {b, radius});
    return dj.distance(b);
  }

  /// The canonical pair <a, b> if it is one at some scale.
  std::optional<CanonicalPair> canonical_pair(Vertex a, Vertex b) const {
    if (a == b) return std::nullopt;
    const RegionId ra = h_->owner(a), rb = h_->owner(b);
    if (!h_->is_ancestor_or_self(rb, ra)) return std::nullopt;
    const auto& list = partners(a, rb);
    auto it = std::lower_bound(list.begin(), list.end(), b, [](const auto& e, Vertex x) { return e.first < x; });
    if (it == list.end() || it->first != b) return std::nullopt;
    return make(a, b, it->second);
  }

  /// Pair for the step between two sequence vertices, oriented so that the
  /// second vertex's separator is an ancestor-or-self of the first's. Steps
  /// that are not canonical come back with scale -1 and the exact distance.
  CanonicalPair orient(Vertex u, Vertex w) const {
    Vertex a = u, b = w;
    if (!h_->is_ancestor_or_self(h_->owner(b), h_->owner(a))) std::swap(a, b);
    if (!h_->is_ancestor_or_self(h_->owner(b), h_->owner(a))) {
      throw PreconditionError("step joins separators of unrelated regions");
    }
    if (auto p = canonical_pair(a, b)) return *p;
    CanonicalPair p;
    p.a = a;
    p.b = b;
    p.region = h_->owner(a);
    p.b_region = h_->owner(b);
    auto d = canonical_distance(a, b);
    if (!d) throw PreconditionError("step endpoints are disconnected in the canonical subgraph");
    p.distance = *d;
    return p;
  }

  /// X_v: for every region R containing v, the portals p on S_R with
  /// delta_R(v, p) <= 2^tau(p). Sorted by vertex id.
  const std::vector<Vertex>& relevant_portals(Vertex v) const { return relevant(v).vertices; }

  /// delta_{owner(p)}(v, p) for p in X_v.
  std::int64_t relevant_distance(Vertex v, Vertex p) const {
    const auto& x = relevant(v);
    auto it = std::lower_bound(x.vertices.begin(), x.vertices.end(), p);
    if (it == x.vertices.end() || *it != p) throw PreconditionError("portal is not relevant to the vertex");
    return x.distance[static_cast<std::size_t>(it - x.vertices.begin())];
  }

  bool is_relevant(Vertex v, Vertex p) const {
    const auto& x = relevant_portals(v);
    return std::binary_search(x.begin(), x.end(), p);
  }

  /// All canonical pairs with both endpoints in X_v, sorted.
  std::vector<CanonicalPair> rel_pairs(Vertex v) const {
    const auto& x = relevant_portals(v);
    std::vector<CanonicalPair> out;
    for (Vertex a : x) {
      for (RegionId rb = h_->owner(a); rb != kNoRegion; rb = h_->region(rb).parent) {
        for (const auto& [b, d] : partners(a, rb)) {
          if (b != a && std::binary_search(x.begin(), x.end(), b)) out.push_back(make(a, b, d));
        }
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  /// Claim-style walk from `a` toward `p` on one separator: repeatedly jump to
  /// the first vertex whose scale exceeds the current one, and finish at `p`
  /// once the current scale reaches tau(p).
  std::vector<Vertex> tau_escalation(Vertex a, Vertex p) const {
    const RegionId r = h_->owner(a);
    if (h_->owner(p) != r) throw PreconditionError("vertices lie on different separators");
    const auto& sep = h_->separator(r).vertices;
    const std::size_t target = h_->position(p);
    std::size_t cur = h_->position(a);
    std::vector<Vertex> out{a};
    const int tp = portals_->tau(p);
    while (cur != target) {
      const int tc = portals_->tau(sep[cur]);
      if (tc >= tp) {
        cur = target;
      } else {
        do {
          cur = cur < target ? cur + 1 : cur - 1;
        } while (portals_->tau(sep[cur]) < tc + 1);
      }
      out.push_back(sep[cur]);
    }
    return out;
  }

  /// Exact sequence between two vertices of one internal separator: both
  /// walks escalate to the highest-scale vertex between them.
  CanonicalSequence canonical_sequence_on_separator(Vertex a, Vertex b) const {
    if (h_->owner(a) != h_->owner(b)) throw PreconditionError("vertices lie on different separators");
    CanonicalSequence seq;
    seq.vertices = separator_walk(a, b);
    fill_steps(seq);
    return seq;
  }

  /// Sequence from `a` to `b` through portals of scale s = floor(log2 |P|)+2
  /// (P the shortest a-b path) meeting at the portal nearest to where P
  /// crosses the separator of the lowest region containing it.
  CanonicalSequence find_canonical_sequence(Vertex a, Vertex b) const {
    CanonicalSequence seq;
    if (a == b) {
      seq.vertices = {a};
      return seq;
    }
    auto path = shortest_path(*g_, a, b);
    if (!path) throw PreconditionError("vertices are disconnected");
    RegionId region = h_->owner(path->vertices.front());
    for (Vertex v : path->vertices) region = h_->lca(region, h_->owner(v));
    Vertex x = kNoVertex;
    for (Vertex v : path->vertices) {
      if (h_->owner(v) == region) {
        x = v;
        break;
      }
    }
    const int s = std::min(floor_log2(path->base_length()) + 2, portals_->max_scale());
    const Vertex p = portals_->nearest_portal(x, s);
    std::vector<Vertex> first = half_sequence(a, p, s, region);
    std::vector<Vertex> second = half_sequence(b, p, s, region);
    std::reverse(second.begin(), second.end());
    first.insert(first.end(), second.begin() + 1, second.end());
    seq.vertices = dedupe(std::move(first));
    fill_steps(seq);
    return seq;
  }

 private:
  using Partners = std::vector<std::pair<Vertex, std::int64_t>>;
  struct Relevant {
    std::vector<Vertex> vertices;
    std::vector<std::int64_t> distance;
  };

  const Relevant& relevant(Vertex v) const {
    return relevant_.get(v, [&] {
      std::vector<std::pair<Vertex, std::int64_t>> found;
      auto& dj = thread_base_dijkstra();
      for (RegionId r = h_->owner(v); r != kNoRegion; r = h_->region(r).parent) {
        int top = 0;
        for (Vertex p : h_->separator(r).vertices) top = std::max(top, portals_->tau(p));
        dj.run(*g_, v, h_->in_region(r), {kNoVertex, pow2(top)});
        for (Vertex p : h_->separator(r).vertices) {
          if (dj.settled(p) && dj.base(p) <= pow2(portals_->tau(p))) found.emplace_back(p, dj.base(p));
        }
      }
      std::sort(found.begin(), found.end());
      Relevant out;
      for (const auto& [p, d] : found) {
        out.vertices.push_back(p);
        out.distance.push_back(d);
      }
      return out;
    });
  }

  CanonicalPair make(Vertex a, Vertex b, std::int64_t d) const {
    CanonicalPair p;
    p.a = a;
    p.b = b;
    p.region = h_->owner(a);
    p.b_region = h_->owner(b);
    p.distance = d;
    p.scale = d <= 1 ? 0 : ceil_log2(d);
    return p;
  }

  /// Vertices b on S_rb forming a canonical pair <a, b>, with distances.
  const Partners& partners(Vertex a, RegionId rb) const {
    return partners_.get({a, rb}, [&] {
      Partners out;
      const RegionId ra = h_->owner(a);
      auto& dj = thread_base_dijkstra();
      dj.run(*g_, a, h_->in_region_plus(ra, rb), {kNoVertex, pow2(portals_->tau(a))});
      for (Vertex b : h_->separator(rb).vertices) {
        if (b == a || !dj.settled(b)) continue;
        const int scale = std::min(portals_->tau(a), portals_->tau(b));
        if (dj.base(b) <= pow2(scale)) out.emplace_back(b, dj.base(b));
      }
      std::sort(out.begin(), out.end());
      return out;
    });
  }

  static std::vector<Vertex> dedupe(std::vector<Vertex> v) {
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
  }

  /// On-separator sequence from a to b, with steps that fail the canonical
  /// test split at their highest-scale interior vertex.
  std::vector<Vertex> separator_walk(Vertex a, Vertex b) const {
    if (a == b) return {a};
    const RegionId r = h_->owner(a);
    const auto& sep = h_->separator(r).vertices;
    std::size_t lo = h_->position(a), hi = h_->position(b);
    const int dir = lo <= hi ? 1 : -1;
    std::size_t best = lo;
    for (std::size_t k = lo;; k = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(k) + dir)) {
      if (portals_->tau(sep[k]) > portals_->tau(sep[best])) best = k;
      if (k == hi) break;
    }
    const Vertex p = sep[best];
    std::vector<Vertex> left = tau_escalation(a, p);
    std::vector<Vertex> right = tau_escalation(b, p);
    std::reverse(right.begin(), right.end());
    left.insert(left.end(), right.begin() + 1, right.end());
    left = dedupe(std::move(left));
    std::vector<Vertex> out{left.front()};
    for (std::size_t i = 1; i < left.size(); ++i) refine(left[i - 1], left[i], out);
    return out;
  }

  void refine(Vertex u, Vertex w, std::vector<Vertex>& out) const {
    const auto& sep = h_->separator(h_->owner(u)).vertices;
    std::size_t pu = h_->position(u), pw = h_->position(w);
    if (canonical_pair(u, w) || (pu > pw ? pu - pw : pw - pu) <= 1) {
      out.push_back(w);
      return;
    }
    const std::size_t lo = std::min(pu, pw), hi = std::max(pu, pw);
    std::size_t m = lo + 1;
    for (std::size_t k = lo + 1; k < hi; ++k) {
      if (portals_->tau(sep[k]) > portals_->tau(sep[m])) m = k;
    }
    refine(u, sep[m], out);
    refine(sep[m], w, out);
  }

  /// Vertices from `a` to the meeting portal `p` on the separator of `region`.
  std::vector<Vertex> half_sequence(Vertex a, Vertex p, int s, RegionId region) const {
    const RegionId r1 = h_->owner(a);
    const Vertex x1 = portals_->nearest_portal(a, s);
    std::vector<Vertex> out = separator_walk(a, x1);
    if (r1 == region) {
      auto tail = separator_walk(x1, p);
      out.insert(out.end(), tail.begin() + 1, tail.end());
      return out;
    }
    auto tilde = shortest_path(*g_, x1, p, h_->in_region(region));
    if (!tilde) throw PreconditionError("meeting portal unreachable inside the region");
    RegionId cur = r1;
    for (Vertex v : tilde->vertices) {
      if (h_->contains(cur, v)) continue;
      cur = h_->owner(v);
      const Vertex xi = portals_->nearest_portal(v, s);
      out.push_back(xi);
      if (cur == region) {
        auto tail = separator_walk(xi, p);
        out.insert(out.end(), tail.begin() + 1, tail.end());
        return out;
      }
    }
    throw PreconditionError("walk toward the meeting portal never reached its region");
  }

  void fill_steps(CanonicalSequence& seq) const {
    for (std::size_t i = 1; i < seq.vertices.size(); ++i) {
      CanonicalPair p = orient(seq.vertices[i - 1], seq.vertices[i]);
      seq.steps.push_back(p.distance);
      seq.pairs.push_back(p);
    }
  }

  const Graph* g_;
  const SeparatorHierarchy* h_;
  const PortalIndex* portals_;
  mutable OnceMap<Vertex, Relevant> relevant_;
  mutable OnceMap<std::pair<Vertex, RegionId>, Partners> partners_;
};

}  // namespace damkit
