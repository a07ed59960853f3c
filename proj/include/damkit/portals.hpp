#pragma once

#include <cmath>
#include <cstdint>
#include <ostream>
#include <vector>

#include "damkit/graph.hpp"
#include "damkit/hierarchy.hpp"
#include "damkit/shortest_path.hpp"

namespace damkit {

/// Smallest L with 2^L >= x (x >= 1).
inline int ceil_log2(std::int64_t x) {
  int l = 0;
  while ((std::int64_t{1} << l) < x) ++l;
  return l;
}

/// Largest l with 2^l <= x (x >= 1).
inline int floor_log2(std::int64_t x) {
  int l = 0;
  while ((std::int64_t{1} << (l + 1)) <= x) ++l;
  return l;
}

inline std::int64_t pow2(int i) { return std::int64_t{1} << i; }

/// Upper bound on the base-weight diameter: exact (all sources) on small
/// graphs, twice an eccentricity otherwise. Taken over all components.
inline std::int64_t diameter_bound(const Graph& g, Vertex exact_limit = 2048) {
  auto& dj = thread_base_dijkstra();
  auto all = [](Vertex) { return true; };
  std::int64_t best = 0;
  if (g.vertex_count() <= exact_limit) {
    for (Vertex s = 0; s < g.vertex_count(); ++s) {
      dj.run(g, s, all);
      for (Vertex v : dj.settled_order()) best = std::max(best, dj.base(v));
    }
    return best;
  }
  auto [comp, count] = connected_components(g);
  std::vector<char> done(static_cast<std::size_t>(count), 0);
  for (Vertex s = 0; s < g.vertex_count(); ++s) {
    auto& d = done[static_cast<std::size_t>(comp[static_cast<std::size_t>(s)])];
    if (d) continue;
    d = 1;
    dj.run(g, s, all);
    std::int64_t ecc = 0;
    for (Vertex v : dj.settled_order()) ecc = std::max(ecc, dj.base(v));
    best = std::max(best, 2 * ecc);
  }
  return best;
}

/// The distance bound D used for the scale range: four times a diameter
/// bound, so that scale floor(log2 |P|) + 2 of any shortest path P stays in
/// range.
inline std::int64_t scale_bound(const Graph& g) { return std::max<std::int64_t>(2, 4 * diameter_bound(g)); }

/// Nested scale-i portal sets along every internal separator.
/// Pi_0 = Pi_1 = all separator vertices; for i >= 2 a greedy sweep from the
/// first endpoint keeps a Pi_{i-1} vertex when its along-path distance from
/// the last kept one is at least (eps/2) 2^i.
class PortalIndex {
 public:
  PortalIndex(const Graph& g, const SeparatorHierarchy& h, double epsilon, std::int64_t distance_bound)
      : h_(&h), epsilon_(epsilon), D_(distance_bound) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw PreconditionError("portal epsilon must lie in (0,1)");
    if (distance_bound < 1) throw PreconditionError("distance bound must be positive");
    L_ = std::max(1, ceil_log2(distance_bound));
    tau_.assign(static_cast<std::size_t>(g.vertex_count()), 0);
    prefix_.resize(h.region_count());
    for (const Region& r : h.regions()) {
      const auto& sep = r.separator.vertices;
      auto& pre = prefix_[static_cast<std::size_t>(r.id)];
      pre.assign(sep.size(), 0);
      for (std::size_t k = 1; k < sep.size(); ++k) {
        pre[k] = pre[k - 1] + g.edge(*g.find_edge(sep[k - 1], sep[k])).weight;
      }
      std::vector<std::size_t> kept(sep.size());
      std::iota(kept.begin(), kept.end(), 0);
      for (Vertex v : sep) tau_[static_cast<std::size_t>(v)] = 1;
      for (int i = 2; i <= L_; ++i) {
        const double spacing = epsilon_ * std::ldexp(1.0, i - 1);
        std::vector<std::size_t> next;
        for (std::size_t pos : kept) {
          if (next.empty() || static_cast<double>(pre[pos] - pre[next.back()]) >= spacing) next.push_back(pos);
        }
        for (std::size_t pos : next) tau_[static_cast<std::size_t>(sep[pos])] = i;
        kept = std::move(next);
      }
    }
  }

  double epsilon() const { return epsilon_; }
  std::int64_t distance_bound() const { return D_; }
  /// Largest scale L = ceil(log2 D).
  int max_scale() const { return L_; }
  const SeparatorHierarchy& hierarchy() const { return *h_; }

  /// Largest scale at which `v` is a portal of its owner's separator.
  int tau(Vertex v) const { return tau_[static_cast<std::size_t>(v)]; }
  bool is_portal(Vertex v, int scale) const { return tau(v) >= scale; }

  /// Base distance along the separator of `r` between two positions.
  std::int64_t along(RegionId r, std::size_t p, std::size_t q) const {
    const auto& pre = prefix_[static_cast<std::size_t>(r)];
    return p <= q ? pre[q] - pre[p] : pre[p] - pre[q];
  }
  std::int64_t along(Vertex u, Vertex v) const {
    if (h_->owner(u) != h_->owner(v)) throw PreconditionError("vertices lie on different separators");
    return along(h_->owner(u), h_->position(u), h_->position(v));
  }

  /// Positions of the (scale, r)-portals in separator order.
  std::vector<std::size_t> portal_positions(RegionId r, int scale) const {
    const auto& sep = h_->separator(r).vertices;
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < sep.size(); ++k) {
      if (is_portal(sep[k], scale)) out.push_back(k);
    }
    return out;
  }

  /// The (scale, owner(v))-portal nearest to `v` along its separator; ties go
  /// to the earlier position.
  Vertex nearest_portal(Vertex v, int scale) const {
    const RegionId r = h_->owner(v);
    const auto& sep = h_->separator(r).vertices;
    const std::size_t pos = h_->position(v);
    if (is_portal(v, scale)) return v;
    std::optional<std::size_t> left, right;
    for (std::size_t k = pos; k-- > 0;) {
      if (is_portal(sep[k], scale)) {
        left = k;
        break;
      }
    }
    for (std::size_t k = pos + 1; k < sep.size(); ++k) {
      if (is_portal(sep[k], scale)) {
        right = k;
        break;
      }
    }
    if (!left) return sep[*right];
    if (!right) return sep[*left];
    return along(r, *left, pos) <= along(r, pos, *right) ? sep[*left] : sep[*right];
  }

  /// The (scale, r)-portals within base distance `radius` of `v` inside region r.
  std::vector<Vertex> portals_near(const Graph& g, Vertex v, RegionId r, int scale, std::int64_t radius) const {
    if (!h_->contains(r, v)) throw PreconditionError("vertex outside the region");
    auto& dj = thread_base_dijkstra();
    dj.run(g, v, h_->in_region(r), {kNoVertex, radius});
    std::vector<Vertex> out;
    for (Vertex x : dj.settled_order()) {
      if (h_->owner(x) == r && is_portal(x, scale)) out.push_back(x);
    }
    std::sort(out.begin(), out.end(), [&](Vertex a, Vertex b) { return h_->position(a) < h_->position(b); });
    return out;
  }

  void dump(std::ostream& os) const {
    for (const Region& r : h_->regions()) {
      for (int i = 0; i <= L_; ++i) {
        os << "region " << r.id << " scale " << i << ':';
        for (std::size_t pos : portal_positions(r.id, i)) os << ' ' << r.separator.vertices[pos];
        os << '\n';
      }
    }
  }

 private:
  const SeparatorHierarchy* h_;
  double epsilon_;
  std::int64_t D_;
  int L_ = 1;
  std::vector<int> tau_;
  std::vector<std::vector<std::int64_t>> prefix_;
};

}  // namespace damkit
