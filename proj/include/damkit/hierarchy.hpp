#pragma once

#include <algorithm>
#include <istream>
#include <memory>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "damkit/graph.hpp"
#include "damkit/path.hpp"
#include "damkit/shortest_path.hpp"

namespace damkit {

using RegionId = std::int32_t;
inline constexpr RegionId kNoRegion = -1;

struct Region {
  RegionId id = kNoRegion;
  RegionId parent = kNoRegion;
  std::vector<RegionId> children;
  Path separator;                // internal separator, a shortest path inside the region
  std::vector<Vertex> members;   // sorted vertex set
  int depth = 0;                 // root has depth 0

  bool is_leaf() const { return children.empty(); }
};

/// Tree of regions; each region removes one shortest-path separator and its
/// children are the connected components of what is left. Every vertex lies on
/// exactly one internal separator (its owner).
class SeparatorHierarchy {
 public:
  SeparatorHierarchy() = default;

  /// Takes regions with ids equal to their index and parents listed before
  /// children; validates all structural invariants.
  SeparatorHierarchy(const Graph& g, std::vector<Region> regions) : regions_(std::move(regions)) {
    index(g);
    validate(g);
  }

  const std::vector<Region>& regions() const { return regions_; }
  const Region& region(RegionId r) const { return regions_[static_cast<std::size_t>(r)]; }
  RegionId root() const { return 0; }
  std::size_t region_count() const { return regions_.size(); }
  Vertex vertex_count() const { return static_cast<Vertex>(owner_.size()); }

  /// Number of levels of the tree (a single region has height 1).
  int height() const { return height_; }

  RegionId owner(Vertex v) const { return owner_[static_cast<std::size_t>(v)]; }
  /// Index of `v` along its owner's separator.
  std::size_t position(Vertex v) const { return static_cast<std::size_t>(position_[static_cast<std::size_t>(v)]); }
  const Path& separator(RegionId r) const { return region(r).separator; }

  bool is_ancestor_or_self(RegionId a, RegionId d) const {
    return tin_[static_cast<std::size_t>(a)] <= tin_[static_cast<std::size_t>(d)] &&
           tout_[static_cast<std::size_t>(d)] <= tout_[static_cast<std::size_t>(a)];
  }
  bool is_proper_ancestor(RegionId a, RegionId d) const { return a != d && is_ancestor_or_self(a, d); }

  bool contains(RegionId r, Vertex v) const { return is_ancestor_or_self(r, owner(v)); }
  bool on_separator(RegionId r, Vertex v) const { return owner(v) == r; }

  /// Proper ancestors of `r`, root first. Their internal separators are the
  /// external separators of `r`.
  std::vector<RegionId> external_separators(RegionId r) const {
    std::vector<RegionId> out;
    for (RegionId p = region(r).parent; p != kNoRegion; p = region(p).parent) out.push_back(p);
    std::reverse(out.begin(), out.end());
    return out;
  }

  RegionId lca(RegionId a, RegionId b) const {
    while (region(a).depth > region(b).depth) a = region(a).parent;
    while (region(b).depth > region(a).depth) b = region(b).parent;
    while (a != b) {
      a = region(a).parent;
      b = region(b).parent;
    }
    return a;
  }

  /// Deepest region containing both vertices.
  RegionId lowest_common_region(Vertex u, Vertex v) const { return lca(owner(u), owner(v)); }

  /// Membership predicate for region `r`, optionally extended by the internal
  /// separator of `extra` (an ancestor of `r`).
  struct Filter {
    const SeparatorHierarchy* h;
    RegionId region;
    RegionId extra = kNoRegion;
    bool operator()(Vertex v) const {
      const RegionId o = h->owner(v);
      return h->is_ancestor_or_self(region, o) || o == extra;
    }
  };
  Filter in_region(RegionId r) const { return Filter{this, r, kNoRegion}; }
  Filter in_region_plus(RegionId r, RegionId separator_of) const { return Filter{this, r, separator_of}; }

  /// Text form: one line per region `id parent sep... | members...`.
  void dump(std::ostream& os) const {
    for (const Region& r : regions_) {
      os << r.id << ' ' << r.parent;
      for (Vertex v : r.separator.vertices) os << ' ' << v;
      os << " |";
      for (Vertex v : r.members) os << ' ' << v;
      os << '\n';
    }
  }

  static SeparatorHierarchy load(std::istream& is, const Graph& g) {
    std::vector<Region> regions;
    std::string line;
    int line_no = 0;
    while (std::getline(is, line)) {
      ++line_no;
      if (line.empty() || line[0] == '#') continue;
      const auto bar = line.find('|');
      if (bar == std::string::npos) throw InputError("hierarchy line " + std::to_string(line_no) + ": missing '|'");
      std::istringstream head(line.substr(0, bar));
      std::istringstream tail(line.substr(bar + 1));
      Region r;
      if (!(head >> r.id >> r.parent)) throw InputError("hierarchy line " + std::to_string(line_no) + ": bad header");
      std::vector<Vertex> sep;
      for (Vertex v; head >> v;) sep.push_back(v);
      if (!head.eof()) throw InputError("hierarchy line " + std::to_string(line_no) + ": bad separator");
      for (Vertex v; tail >> v;) r.members.push_back(v);
      if (!tail.eof()) throw InputError("hierarchy line " + std::to_string(line_no) + ": bad member list");
      for (Vertex v : sep) {
        if (!g.valid_vertex(v)) throw InputError("hierarchy line " + std::to_string(line_no) + ": vertex out of range");
      }
      try {
        r.separator = make_path(g, std::move(sep));
      } catch (const PreconditionError&) {
        throw InputError("hierarchy line " + std::to_string(line_no) + ": separator is not a path");
      }
      if (static_cast<std::size_t>(r.id) != regions.size()) {
        throw InputError("hierarchy line " + std::to_string(line_no) + ": region ids must be 0,1,2,... in order");
      }
      regions.push_back(std::move(r));
    }
    for (Region& r : regions) {
      if (r.parent != kNoRegion) {
        if (r.parent < 0 || r.parent >= r.id) throw InputError("hierarchy: parent must precede child");
        regions[static_cast<std::size_t>(r.parent)].children.push_back(r.id);
      }
    }
    try {
      return SeparatorHierarchy(g, std::move(regions));
    } catch (const PreconditionError& e) {
      throw InputError(std::string("hierarchy rejected: ") + e.what());
    }
  }

 private:
  void index(const Graph& g) {
    if (regions_.empty()) throw PreconditionError("hierarchy needs at least one region");
    const auto n = static_cast<std::size_t>(g.vertex_count());
    owner_.assign(n, kNoRegion);
    position_.assign(n, -1);
    for (const Region& r : regions_) {
      for (std::size_t i = 0; i < r.separator.vertices.size(); ++i) {
        const Vertex v = r.separator.vertices[i];
        if (owner_[static_cast<std::size_t>(v)] != kNoRegion) {
          throw PreconditionError("vertex " + std::to_string(v) + " lies on two separators");
        }
        owner_[static_cast<std::size_t>(v)] = r.id;
        position_[static_cast<std::size_t>(v)] = static_cast<int>(i);
      }
    }
    for (std::size_t v = 0; v < n; ++v) {
      if (owner_[v] == kNoRegion) throw PreconditionError("vertex " + std::to_string(v) + " lies on no separator");
    }
    tin_.assign(regions_.size(), 0);
    tout_.assign(regions_.size(), 0);
    int clock = 0;
    height_ = 0;
    std::vector<std::pair<RegionId, std::size_t>> stack{{0, 0}};
    regions_[0].depth = 0;
    if (regions_[0].parent != kNoRegion) throw PreconditionError("region 0 must be the root");
    tin_[0] = clock++;
    std::size_t visited = 1;
    while (!stack.empty()) {
      auto& [r, next] = stack.back();
      Region& reg = regions_[static_cast<std::size_t>(r)];
      height_ = std::max(height_, reg.depth + 1);
      if (next < reg.children.size()) {
        const RegionId c = reg.children[next++];
        Region& child = regions_[static_cast<std::size_t>(c)];
        if (child.parent != r) throw PreconditionError("child/parent links disagree");
        child.depth = reg.depth + 1;
        tin_[static_cast<std::size_t>(c)] = clock++;
        ++visited;
        stack.emplace_back(c, 0);
      } else {
        tout_[static_cast<std::size_t>(r)] = clock++;
        stack.pop_back();
      }
    }
    if (visited != regions_.size()) throw PreconditionError("regions do not form a single tree");
  }

  void validate(const Graph& g) const {
    for (const Region& r : regions_) {
      if (r.separator.empty()) throw PreconditionError("region " + std::to_string(r.id) + " has an empty separator");
      if (!std::is_sorted(r.members.begin(), r.members.end()) ||
          std::adjacent_find(r.members.begin(), r.members.end()) != r.members.end()) {
        throw PreconditionError("region " + std::to_string(r.id) + " members must be sorted and distinct");
      }
      // membership implied by the tree must equal the listed vertex set
      std::size_t count = 0;
      for (Vertex v = 0; v < g.vertex_count(); ++v) {
        if (contains(r.id, v)) {
          ++count;
          if (!std::binary_search(r.members.begin(), r.members.end(), v)) {
            throw PreconditionError("region " + std::to_string(r.id) + " is missing vertex " + std::to_string(v));
          }
        }
      }
      if (count != r.members.size()) throw PreconditionError("region " + std::to_string(r.id) + " lists foreign vertices");
      // separator is the shortest path between its endpoints inside the region
      auto sp = shortest_path(g, r.separator.front(), r.separator.back(), in_region(r.id));
      if (!sp || sp->vertices != r.separator.vertices) {
        throw PreconditionError("separator of region " + std::to_string(r.id) + " is not a shortest path in it");
      }
      // children are exactly the components of region minus separator
      const auto comps = components_without_separator(g, r);
      std::vector<std::vector<Vertex>> kids;
      for (RegionId c : r.children) kids.push_back(region(c).members);
      std::sort(kids.begin(), kids.end());
      if (kids != comps) {
        throw PreconditionError("children of region " + std::to_string(r.id) + " are not the components left by its separator");
      }
    }
  }

  std::vector<std::vector<Vertex>> components_without_separator(const Graph& g, const Region& r) const {
    std::vector<std::vector<Vertex>> out;
    std::vector<char> seen(static_cast<std::size_t>(g.vertex_count()), 0);
    for (Vertex v : r.separator.vertices) seen[static_cast<std::size_t>(v)] = 1;
    for (Vertex s : r.members) {
      if (seen[static_cast<std::size_t>(s)]) continue;
      std::vector<Vertex> comp{s};
      seen[static_cast<std::size_t>(s)] = 1;
      for (std::size_t i = 0; i < comp.size(); ++i) {
        for (const Arc& a : g.neighbors(comp[i])) {
          if (!seen[static_cast<std::size_t>(a.to)] && contains(r.id, a.to)) {
            seen[static_cast<std::size_t>(a.to)] = 1;
            comp.push_back(a.to);
          }
        }
      }
      std::sort(comp.begin(), comp.end());
      out.push_back(std::move(comp));
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  std::vector<Region> regions_;
  std::vector<RegionId> owner_;
  std::vector<int> position_;
  std::vector<int> tin_, tout_;
  int height_ = 0;
};

namespace detail {

/// Sizes of connected components of `members` minus `blocked` (marked with
/// `stamp` in `mark`); returns the largest.
inline std::size_t largest_component(const Graph& g, const std::vector<Vertex>& members, std::vector<int>& mark,
                                     int inside, int blocked_stamp, int visit_stamp, std::vector<Vertex>& queue) {
  std::size_t best = 0;
  for (Vertex s : members) {
    int& ms = mark[static_cast<std::size_t>(s)];
    if (ms == blocked_stamp || ms == visit_stamp) continue;
    ms = visit_stamp;
    queue.clear();
    queue.push_back(s);
    for (std::size_t i = 0; i < queue.size(); ++i) {
      for (const Arc& a : g.neighbors(queue[i])) {
        int& m = mark[static_cast<std::size_t>(a.to)];
        if (m == inside) {
          m = visit_stamp;
          queue.push_back(a.to);
        }
      }
    }
    best = std::max(best, queue.size());
  }
  return best;
}

}  // namespace detail

/// Picks a shortest-path separator for the connected vertex set `members`:
/// among root-to-leaf paths of shortest-path trees rooted at two far-apart
/// vertices, the one leaving the smallest largest component.
inline std::vector<Vertex> choose_separator(const Graph& g, const std::vector<Vertex>& members) {
  if (members.size() == 1) return members;
  const auto n = static_cast<std::size_t>(g.vertex_count());
  // mark values: 1 = inside region, other stamps used transiently
  std::vector<int> mark(n, 0);
  for (Vertex v : members) mark[static_cast<std::size_t>(v)] = 1;
  auto allowed = [&](Vertex v) { return mark[static_cast<std::size_t>(v)] != 0; };

  PerturbedDijkstra& dj = thread_perturbed_dijkstra();
  const Vertex start = *std::min_element(members.begin(), members.end());
  dj.run(g, start, allowed);
  const Vertex r1 = dj.settled_order().back();
  dj.run(g, r1, allowed);
  const Vertex r2 = dj.settled_order().back();

  std::vector<Vertex> best;
  std::size_t best_largest = SIZE_MAX;
  int stamp = 2;
  std::vector<Vertex> queue;
  std::vector<Vertex> path;
  for (Vertex root : {r1, r2}) {
    dj.run(g, root, allowed);
    std::vector<Vertex> parent(n, kNoVertex);
    std::vector<char> has_child(n, 0);
    for (Vertex v : dj.settled_order()) {
      parent[static_cast<std::size_t>(v)] = dj.parent(v);
      if (dj.parent(v) != kNoVertex) has_child[static_cast<std::size_t>(dj.parent(v))] = 1;
    }
    const auto order = dj.settled_order();
    for (Vertex leaf : order) {
      if (has_child[static_cast<std::size_t>(leaf)] || leaf == root) continue;
      path.clear();
      for (Vertex x = leaf; x != kNoVertex; x = parent[static_cast<std::size_t>(x)]) path.push_back(x);
      const int blocked = ++stamp;
      const int visit = ++stamp;
      for (Vertex x : path) mark[static_cast<std::size_t>(x)] = blocked;
      const std::size_t largest = detail::largest_component(g, members, mark, 1, blocked, visit, queue);
      for (Vertex v : members) mark[static_cast<std::size_t>(v)] = 1;
      if (largest < best_largest || (largest == best_largest && path.size() < best.size())) {
        best_largest = largest;
        best.assign(path.rbegin(), path.rend());
      }
    }
  }
  return best;
}

/// Builds the hierarchy by recursive shortest-path-tree separators.
/// Requires a connected graph.
inline SeparatorHierarchy build_hierarchy(const Graph& g) {
  if (g.vertex_count() == 0) throw PreconditionError("empty graph");
  if (connected_components(g).second != 1) throw PreconditionError("build_hierarchy requires a connected graph");
  std::vector<Region> regions;
  Region root;
  root.id = 0;
  root.members.resize(static_cast<std::size_t>(g.vertex_count()));
  std::iota(root.members.begin(), root.members.end(), 0);
  regions.push_back(std::move(root));
  std::vector<char> removed(static_cast<std::size_t>(g.vertex_count()), 0);
  std::vector<int> comp_of(static_cast<std::size_t>(g.vertex_count()), -1);
  for (std::size_t idx = 0; idx < regions.size(); ++idx) {
    auto sep = choose_separator(g, regions[idx].members);
    regions[idx].separator = make_path(g, sep);
    for (Vertex v : sep) removed[static_cast<std::size_t>(v)] = 1;
    // components of members minus separator; `removed` also blocks vertices
    // outside this region because they were removed by ancestors or belong to
    // other branches, which are never adjacent except through separators
    std::vector<std::vector<Vertex>> comps;
    const int tag = static_cast<int>(idx);
    for (Vertex s : regions[idx].members) {
      if (removed[static_cast<std::size_t>(s)] || comp_of[static_cast<std::size_t>(s)] == tag) continue;
      std::vector<Vertex> comp{s};
      comp_of[static_cast<std::size_t>(s)] = tag;
      for (std::size_t i = 0; i < comp.size(); ++i) {
        for (const Arc& a : g.neighbors(comp[i])) {
          const auto t = static_cast<std::size_t>(a.to);
          if (!removed[t] && comp_of[t] != tag) {
            comp_of[t] = tag;
            comp.push_back(a.to);
          }
        }
      }
      std::sort(comp.begin(), comp.end());
      comps.push_back(std::move(comp));
    }
    for (auto& comp : comps) {
      Region child;
      child.id = static_cast<RegionId>(regions.size());
      child.parent = static_cast<RegionId>(idx);
      child.members = std::move(comp);
      regions[idx].children.push_back(child.id);
      regions.push_back(std::move(child));
    }
  }
  return SeparatorHierarchy(g, std::move(regions));
}

/// Source of a separator hierarchy for a graph.
class HierarchyProvider {
 public:
  virtual ~HierarchyProvider() = default;
  virtual SeparatorHierarchy build(const Graph& g) const = 0;
};

class ShortestPathTreeProvider final : public HierarchyProvider {
 public:
  SeparatorHierarchy build(const Graph& g) const override { return build_hierarchy(g); }
};

/// Loads a precomputed hierarchy (dump format) and validates it against the graph.
class FileHierarchyProvider final : public HierarchyProvider {
 public:
  explicit FileHierarchyProvider(std::string text) : text_(std::move(text)) {}
  SeparatorHierarchy build(const Graph& g) const override {
    std::istringstream is(text_);
    return SeparatorHierarchy::load(is, g);
  }

 private:
  std::string text_;
};

// ---------------------------------------------------------------------------
// r-division

struct RDivision {
  int r = 0;
  std::vector<std::vector<EdgeId>> regions;     // edge partition
  std::vector<std::vector<Vertex>> vertices;    // sorted vertex set per region
  std::vector<std::vector<Vertex>> boundary;    // sorted boundary vertices per region
  std::vector<char> is_boundary;                // per graph vertex

  std::size_t max_region_vertices() const {
    std::size_t m = 0;
    for (const auto& v : vertices) m = std::max(m, v.size());
    return m;
  }
  std::size_t max_boundary() const {
    std::size_t m = 0;
    for (const auto& b : boundary) m = std::max(m, b.size());
    return m;
  }
};

namespace detail {

inline std::vector<Vertex> endpoints_of(const Graph& g, const std::vector<EdgeId>& edges) {
  std::vector<Vertex> vs;
  vs.reserve(edges.size() * 2);
  for (EdgeId e : edges) {
    vs.push_back(g.edge(e).u);
    vs.push_back(g.edge(e).v);
  }
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  return vs;
}

/// The subgraph formed by `edges`, relabelled densely; `local_to_global` maps back.
inline Graph edge_subgraph(const Graph& g, const std::vector<EdgeId>& edges, std::vector<Vertex>& local_to_global,
                           std::vector<EdgeId>& local_edge_to_global) {
  local_to_global = endpoints_of(g, edges);
  std::vector<EdgeId> sorted_edges = edges;
  std::sort(sorted_edges.begin(), sorted_edges.end());
  Graph sub(static_cast<Vertex>(local_to_global.size()));
  auto local = [&](Vertex v) {
    return static_cast<Vertex>(std::lower_bound(local_to_global.begin(), local_to_global.end(), v) - local_to_global.begin());
  };
  local_edge_to_global.clear();
  for (EdgeId e : sorted_edges) {
    sub.add_edge(local(g.edge(e).u), local(g.edge(e).v), g.edge(e).weight);
    local_edge_to_global.push_back(e);
  }
  return sub;
}

}  // namespace detail

/// Edge partition into pieces of at most `r` vertices by recursive separator
/// splitting. A vertex is boundary iff edges of two or more pieces touch it.
inline RDivision build_r_division(const Graph& g, int r) {
  if (r < 2) throw PreconditionError("r-division needs r >= 2");
  RDivision div;
  div.r = r;
  std::vector<std::vector<EdgeId>> work;
  {
    std::vector<EdgeId> all(static_cast<std::size_t>(g.edge_count()));
    std::iota(all.begin(), all.end(), 0);
    if (!all.empty()) work.push_back(std::move(all));
  }
  while (!work.empty()) {
    std::vector<EdgeId> piece = std::move(work.back());
    work.pop_back();
    std::vector<Vertex> l2g;
    std::vector<EdgeId> le2g;
    Graph sub = detail::edge_subgraph(g, piece, l2g, le2g);
    if (sub.vertex_count() <= r) {
      div.regions.push_back(std::move(piece));
      continue;
    }
    auto [comp, ncomp] = connected_components(sub);
    if (ncomp > 1) {
      // split into connected parts first
      std::vector<std::vector<EdgeId>> parts(static_cast<std::size_t>(ncomp));
      for (EdgeId le = 0; le < sub.edge_count(); ++le) {
        parts[static_cast<std::size_t>(comp[static_cast<std::size_t>(sub.edge(le).u)])].push_back(le2g[static_cast<std::size_t>(le)]);
      }
      for (auto& p : parts) work.push_back(std::move(p));
      continue;
    }
    std::vector<Vertex> members(static_cast<std::size_t>(sub.vertex_count()));
    std::iota(members.begin(), members.end(), 0);
    const auto sep = choose_separator(sub, members);
    std::vector<int> on_sep(static_cast<std::size_t>(sub.vertex_count()), -1);
    for (std::size_t i = 0; i < sep.size(); ++i) on_sep[static_cast<std::size_t>(sep[i])] = static_cast<int>(i);
    // components of the piece minus the separator
    std::vector<int> cid(static_cast<std::size_t>(sub.vertex_count()), -1);
    int count = 0;
    for (Vertex s = 0; s < sub.vertex_count(); ++s) {
      if (on_sep[static_cast<std::size_t>(s)] >= 0 || cid[static_cast<std::size_t>(s)] >= 0) continue;
      std::vector<Vertex> stack{s};
      cid[static_cast<std::size_t>(s)] = count;
      while (!stack.empty()) {
        const Vertex u = stack.back();
        stack.pop_back();
        for (const Arc& a : sub.neighbors(u)) {
          if (on_sep[static_cast<std::size_t>(a.to)] < 0 && cid[static_cast<std::size_t>(a.to)] < 0) {
            cid[static_cast<std::size_t>(a.to)] = count;
            stack.push_back(a.to);
          }
        }
      }
      ++count;
    }
    std::vector<std::vector<EdgeId>> parts(static_cast<std::size_t>(count) + 1);
    for (EdgeId le = 0; le < sub.edge_count(); ++le) {
      const Edge& e = sub.edge(le);
      int c = cid[static_cast<std::size_t>(e.u)];
      if (c < 0) c = cid[static_cast<std::size_t>(e.v)];
      if (c < 0) c = count;  // both endpoints on the separator
      parts[static_cast<std::size_t>(c)].push_back(le2g[static_cast<std::size_t>(le)]);
    }
    bool progress = true;
    for (const auto& p : parts) progress = progress && p.size() < piece.size();
    if (!progress) {
      // every vertex is on the separator: halve the edges along the path order
      std::vector<std::pair<int, EdgeId>> keyed;
      for (EdgeId le = 0; le < sub.edge_count(); ++le) {
        const Edge& e = sub.edge(le);
        keyed.emplace_back(std::min(on_sep[static_cast<std::size_t>(e.u)], on_sep[static_cast<std::size_t>(e.v)]),
                           le2g[static_cast<std::size_t>(le)]);
      }
      std::sort(keyed.begin(), keyed.end());
      const std::size_t half = keyed.size() / 2;
      std::vector<EdgeId> lo, hi;
      for (std::size_t i = 0; i < keyed.size(); ++i) (i < half ? lo : hi).push_back(keyed[i].second);
      work.push_back(std::move(lo));
      work.push_back(std::move(hi));
      continue;
    }
    for (auto& p : parts) {
      if (!p.empty()) work.push_back(std::move(p));
    }
  }
  std::sort(div.regions.begin(), div.regions.end());
  std::vector<int> touch(static_cast<std::size_t>(g.vertex_count()), 0);
  std::vector<int> last(static_cast<std::size_t>(g.vertex_count()), -1);
  for (std::size_t i = 0; i < div.regions.size(); ++i) {
    div.vertices.push_back(detail::endpoints_of(g, div.regions[i]));
    for (Vertex v : div.vertices.back()) {
      if (last[static_cast<std::size_t>(v)] != static_cast<int>(i)) {
        last[static_cast<std::size_t>(v)] = static_cast<int>(i);
        ++touch[static_cast<std::size_t>(v)];
      }
    }
  }
  div.is_boundary.assign(static_cast<std::size_t>(g.vertex_count()), 0);
  for (Vertex v = 0; v < g.vertex_count(); ++v) div.is_boundary[static_cast<std::size_t>(v)] = touch[static_cast<std::size_t>(v)] >= 2;
  for (const auto& vs : div.vertices) {
    std::vector<Vertex> b;
    for (Vertex v : vs) {
      if (div.is_boundary[static_cast<std::size_t>(v)]) b.push_back(v);
    }
    div.boundary.push_back(std::move(b));
  }
  return div;
}

}  // namespace damkit
