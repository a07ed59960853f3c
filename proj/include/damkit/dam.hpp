#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <thread>
#include <unordered_map>
#include <vector>

#include "damkit/proxy.hpp"

namespace damkit {

// ---------------------------------------------------------------------------
// Weighted graphs over original vertex ids, with certificate chains

/// Edge of a minor: `chain` is the original-graph walk it stands for, from u
/// to v. Emulator edges carry no chain.
struct ChainEdge {
  Vertex u;
  Vertex v;
  std::int64_t weight;
  std::vector<Vertex> chain;

  friend bool operator==(const ChainEdge&, const ChainEdge&) = default;
};

struct ChainGraph {
  std::vector<Vertex> vertices;  // sorted original ids
  std::vector<ChainEdge> edges;  // u < v, sorted by (u, v)

  std::size_t vertex_count() const { return vertices.size(); }
  std::size_t edge_count() const { return edges.size(); }
  friend bool operator==(const ChainGraph&, const ChainGraph&) = default;
};

inline ChainGraph chain_graph_of(const Graph& g) {
  ChainGraph out;
  for (Vertex v = 0; v < g.vertex_count(); ++v) out.vertices.push_back(v);
  for (const Edge& e : g.edges()) {
    const Vertex u = std::min(e.u, e.v), v = std::max(e.u, e.v);
    out.edges.push_back({u, v, e.weight, {u, v}});
  }
  std::sort(out.edges.begin(), out.edges.end(), [](const ChainEdge& a, const ChainEdge& b) {
    return std::pair(a.u, a.v) < std::pair(b.u, b.v);
  });
  return out;
}

/// Prunes non-terminal vertices of degree <= 1 and replaces maximal chains of
/// non-terminal degree-2 vertices by single edges weighted by chain length.
/// Parallel edges keep the lighter one, self-loops vanish; repeated to a
/// fixpoint, so the result is idempotent.
inline ChainGraph contract_degree2(const std::vector<ChainEdge>& input, std::span<const Vertex> terminals) {
  std::unordered_map<Vertex, int> local;
  std::vector<Vertex> ids;
  auto id = [&](Vertex v) {
    auto [it, inserted] = local.emplace(v, static_cast<int>(ids.size()));
    if (inserted) ids.push_back(v);
    return it->second;
  };
  for (Vertex t : terminals) id(t);
  struct E {
    int u, v;
    std::int64_t w;
    std::vector<Vertex> chain;
    bool alive;
  };
  std::vector<E> es;
  std::vector<std::vector<int>> inc;
  std::map<std::pair<int, int>, int> by_key;
  auto grow = [&] {
    if (inc.size() < ids.size()) inc.resize(ids.size());
  };
  auto add = [&](int u, int v, std::int64_t w, std::vector<Vertex> chain) {
    if (u == v) return;
    if (u > v) {
      std::swap(u, v);
      std::reverse(chain.begin(), chain.end());
    }
    if (auto it = by_key.find({u, v}); it != by_key.end()) {
      E& e = es[static_cast<std::size_t>(it->second)];
      if (w < e.w || (w == e.w && chain < e.chain)) {
        e.w = w;
        e.chain = std::move(chain);
      }
      return;
    }
    const int eid = static_cast<int>(es.size());
    by_key[{u, v}] = eid;
    es.push_back({u, v, w, std::move(chain), true});
    inc[static_cast<std::size_t>(u)].push_back(eid);
    inc[static_cast<std::size_t>(v)].push_back(eid);
  };
  for (const ChainEdge& e : input) {
    const int u = id(e.u), v = id(e.v);
    grow();
    add(u, v, e.weight, e.chain.empty() ? std::vector<Vertex>{e.u, e.v} : e.chain);
  }
  std::vector<char> terminal(ids.size(), 0);
  for (Vertex t : terminals) terminal[static_cast<std::size_t>(local.at(t))] = 1;

  auto kill = [&](int eid) {
    E& e = es[static_cast<std::size_t>(eid)];
    e.alive = false;
    by_key.erase({e.u, e.v});
  };
  auto live = [&](int v) -> std::vector<int>& {
    auto& l = inc[static_cast<std::size_t>(v)];
    l.erase(std::remove_if(l.begin(), l.end(), [&](int e) { return !es[static_cast<std::size_t>(e)].alive; }), l.end());
    return l;
  };
  std::vector<int> work(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) work[i] = static_cast<int>(ids.size() - 1 - i);
  while (!work.empty()) {
    const int v = work.back();
    work.pop_back();
    if (terminal[static_cast<std::size_t>(v)]) continue;
    auto& l = live(v);
    if (l.size() == 1) {
      const E& e = es[static_cast<std::size_t>(l[0])];
      const int other = e.u == v ? e.v : e.u;
      kill(l[0]);
      l.clear();
      work.push_back(other);
    } else if (l.size() == 2) {
      const int e1 = l[0], e2 = l[1];
      l.clear();
      const E& a = es[static_cast<std::size_t>(e1)];
      const E& b = es[static_cast<std::size_t>(e2)];
      const int x = a.u == v ? a.v : a.u, y = b.u == v ? b.v : b.u;
      std::vector<Vertex> chain = a.chain;  // oriented u -> v
      if (a.u == v) std::reverse(chain.begin(), chain.end());
      std::vector<Vertex> tail = b.chain;
      if (b.v == v) std::reverse(tail.begin(), tail.end());
      chain.insert(chain.end(), tail.begin() + 1, tail.end());
      const std::int64_t w = a.w + b.w;
      kill(e1);
      kill(e2);
      add(x, y, w, std::move(chain));
      work.push_back(x);
      work.push_back(y);
    }
  }
  ChainGraph out;
  for (std::size_t v = 0; v < ids.size(); ++v) {
    if (terminal[v] || !live(static_cast<int>(v)).empty()) out.vertices.push_back(ids[v]);
  }
  std::sort(out.vertices.begin(), out.vertices.end());
  for (const E& e : es) {
    if (!e.alive) continue;
    ChainEdge ce{ids[static_cast<std::size_t>(e.u)], ids[static_cast<std::size_t>(e.v)], e.w, e.chain};
    if (ce.u > ce.v) {
      std::swap(ce.u, ce.v);
      std::reverse(ce.chain.begin(), ce.chain.end());
    }
    out.edges.push_back(std::move(ce));
  }
  std::sort(out.edges.begin(), out.edges.end(), [](const ChainEdge& a, const ChainEdge& b) {
    return std::pair(a.u, a.v) < std::pair(b.u, b.v);
  });
  return out;
}

/// Local Graph over the chain graph's vertices; `ids[i]` is the original id
/// of local vertex i. Parallel edges keep the lightest.
inline Graph to_graph(const ChainGraph& cg, std::vector<Vertex>* ids = nullptr) {
  std::unordered_map<Vertex, Vertex> local;
  for (std::size_t i = 0; i < cg.vertices.size(); ++i) local.emplace(cg.vertices[i], static_cast<Vertex>(i));
  std::map<std::pair<Vertex, Vertex>, std::int64_t> best;
  for (const ChainEdge& e : cg.edges) {
    Vertex u = local.at(e.u), v = local.at(e.v);
    if (u == v) continue;
    if (u > v) std::swap(u, v);
    auto [it, inserted] = best.emplace(std::pair(u, v), e.weight);
    if (!inserted) it->second = std::min(it->second, e.weight);
  }
  Graph g(static_cast<Vertex>(cg.vertices.size()));
  for (const auto& [k, w] : best) g.add_edge(k.first, k.second, w);
  if (ids) *ids = cg.vertices;
  return g;
}

/// Pairwise distances between `terminals` (original ids) inside the chain graph.
inline std::vector<std::vector<std::optional<std::int64_t>>> terminal_distances(const ChainGraph& cg,
                                                                               const std::vector<Vertex>& terminals) {
  const Graph g = to_graph(cg);
  std::vector<Vertex> at;
  for (Vertex t : terminals) {
    auto it = std::lower_bound(cg.vertices.begin(), cg.vertices.end(), t);
    if (it == cg.vertices.end() || *it != t) throw PreconditionError("terminal " + std::to_string(t) + " missing from the sketch");
    at.push_back(static_cast<Vertex>(it - cg.vertices.begin()));
  }
  std::vector<std::vector<std::optional<std::int64_t>>> out;
  for (Vertex s : at) {
    const auto d = base_distances(g, s);
    auto& row = out.emplace_back();
    for (Vertex t : at) row.push_back(d[static_cast<std::size_t>(t)]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Build configuration and results

/// Tuned on the acceptance corpus: the smallest value meeting stretch 1+eps0.
inline constexpr double kDefaultCScale = 0.0028;

struct DamStats {
  double epsilon0 = 0;
  double epsilon = 0;  // smallest derived epsilon over components
  double c_scale = 0;
  int height = 0;      // largest hierarchy height over components
  std::int64_t distance_bound = 0;
  std::size_t rel_pairs = 0;
  std::size_t proxy_pairs = 0;
  std::size_t non_canonical_pairs = 0;  // proxy members that fail the canonical test
  std::size_t safe_paths = 0;
  std::size_t endpoints = 0;
  std::size_t splitting_points = 0;
  std::vector<std::size_t> round_vertices;  // fast build: |V| per round, starting with the input
  double seconds = 0;
};

/// Distance-approximating minor: the overlay M (edges of G), its contraction
/// and the certificate chains inside the contraction's edges.
struct Dam {
  std::vector<Vertex> terminals;  // sorted
  std::vector<EdgeId> overlay;    // sorted edge ids of G
  ChainGraph minor;
  DamStats stats;

  std::size_t overlay_vertex_count(const Graph& g) const {
    std::set<Vertex> vs(terminals.begin(), terminals.end());
    for (EdgeId e : overlay) vs.insert(g.edge(e).u), vs.insert(g.edge(e).v);
    return vs.size();
  }
};

struct DamOptions {
  double epsilon0 = 0.5;
  double c_scale = kDefaultCScale;
  int threads = 0;  // 0: DAMKIT_THREADS or hardware concurrency
};

inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("DAMKIT_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

template <class Body>
void parallel_for(std::size_t count, int threads, Body&& body) {
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < count;) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

/// eps = eps0 / (c_scale * h^3 * max(1, log2 D)), never above eps0.
inline double derived_epsilon(double epsilon0, double c_scale, int height, std::int64_t distance_bound) {
  const double h = std::max(1, height);
  const double logd = std::max(1.0, std::log2(static_cast<double>(distance_bound)));
  return std::min(epsilon0, epsilon0 / (c_scale * h * h * h * logd));
}

inline void check_epsilon0(double epsilon0) {
  if (!(epsilon0 > 0.0 && epsilon0 < 1.0)) throw PreconditionError("epsilon0 must lie in (0,1)");
}

/// Hierarchy, portals and the memo tables for one connected graph; reusable
/// across terminal sets. Not movable: the indexes point into each other.
class DamContext {
 public:
  /// `epsilon` < 0 selects derived_epsilon(epsilon0, c_scale, ...).
  DamContext(Graph g, double epsilon0, double c_scale, double epsilon = -1,
             const HierarchyProvider& provider = ShortestPathTreeProvider{})
      : g_(std::move(g)),
        h_(provider.build(g_)),
        D_(scale_bound(g_)),
        epsilon0_(epsilon0),
        c_scale_(c_scale),
        epsilon_(epsilon > 0 ? epsilon : derived_epsilon(epsilon0, c_scale, h_.height(), D_)),
        pi_(g_, h_, epsilon_, D_),
        ci_(g_, h_, pi_),
        di_(ci_),
        px_(di_) {}
  DamContext(const DamContext&) = delete;
  DamContext& operator=(const DamContext&) = delete;

  const Graph& graph() const { return g_; }
  const SeparatorHierarchy& hierarchy() const { return h_; }
  const PortalIndex& portals() const { return pi_; }
  const CanonicalIndex& canonical() const { return ci_; }
  const DetourIndex& detours() const { return di_; }
  const ProxyIndex& proxies() const { return px_; }
  double epsilon0() const { return epsilon0_; }
  double c_scale() const { return c_scale_; }
  double epsilon() const { return epsilon_; }
  std::int64_t distance_bound() const { return D_; }

 private:
  Graph g_;
  SeparatorHierarchy h_;
  std::int64_t D_;
  double epsilon0_, c_scale_, epsilon_;
  PortalIndex pi_;
  CanonicalIndex ci_;
  DetourIndex di_;
  ProxyIndex px_;
};

namespace detail {

inline std::vector<Vertex> sorted_terminals(const Graph& g, std::vector<Vertex> terminals) {
  if (terminals.empty()) throw PreconditionError("terminal set is empty");
  for (Vertex t : terminals)
    if (!g.valid_vertex(t)) throw PreconditionError("terminal " + std::to_string(t) + " out of range");
  std::sort(terminals.begin(), terminals.end());
  terminals.erase(std::unique(terminals.begin(), terminals.end()), terminals.end());
  return terminals;
}

struct Component {
  Graph graph;
  std::vector<Vertex> to_global;  // local vertex -> g vertex
  std::vector<EdgeId> edge_to_global;
  std::vector<Vertex> terminals;  // local ids, sorted
};

/// Connected components of g holding at least one terminal.
inline std::vector<Component> terminal_components(const Graph& g, const std::vector<Vertex>& terminals) {
  const auto [comp, count] = connected_components(g);
  std::vector<int> wanted(static_cast<std::size_t>(count), -1);
  std::vector<Component> out;
  for (Vertex t : terminals) {
    int& slot = wanted[static_cast<std::size_t>(comp[static_cast<std::size_t>(t)])];
    if (slot < 0) {
      slot = static_cast<int>(out.size());
      out.emplace_back();
    }
  }
  std::vector<Vertex> local(static_cast<std::size_t>(g.vertex_count()), kNoVertex);
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    const int slot = wanted[static_cast<std::size_t>(comp[static_cast<std::size_t>(v)])];
    if (slot < 0) continue;
    auto& c = out[static_cast<std::size_t>(slot)];
    local[static_cast<std::size_t>(v)] = static_cast<Vertex>(c.to_global.size());
    c.to_global.push_back(v);
  }
  for (auto& c : out) c.graph = Graph(static_cast<Vertex>(c.to_global.size()));
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const Edge& ed = g.edge(e);
    const int slot = wanted[static_cast<std::size_t>(comp[static_cast<std::size_t>(ed.u)])];
    if (slot < 0) continue;
    auto& c = out[static_cast<std::size_t>(slot)];
    c.graph.add_edge(local[static_cast<std::size_t>(ed.u)], local[static_cast<std::size_t>(ed.v)], ed.weight);
    c.edge_to_global.push_back(e);
  }
  for (Vertex t : terminals) {
    out[static_cast<std::size_t>(wanted[static_cast<std::size_t>(comp[static_cast<std::size_t>(t)])])].terminals.push_back(
        local[static_cast<std::size_t>(t)]);
  }
  return out;
}

inline ChainEdge map_edge(const ChainEdge& e, const std::vector<Vertex>& to_global) {
  ChainEdge out{to_global[static_cast<std::size_t>(e.u)], to_global[static_cast<std::size_t>(e.v)], e.weight, {}};
  for (Vertex v : e.chain) out.chain.push_back(to_global[static_cast<std::size_t>(v)]);
  if (out.u > out.v) {
    std::swap(out.u, out.v);
    std::reverse(out.chain.begin(), out.chain.end());
  }
  return out;
}

/// Union of per-component results, mapped back to g's ids.
inline void merge_component(Dam& into, const Dam& part, const Component& c) {
  for (EdgeId e : part.overlay) into.overlay.push_back(c.edge_to_global[static_cast<std::size_t>(e)]);
  for (Vertex v : part.minor.vertices) into.minor.vertices.push_back(c.to_global[static_cast<std::size_t>(v)]);
  for (const ChainEdge& e : part.minor.edges) into.minor.edges.push_back(map_edge(e, c.to_global));
  auto& s = into.stats;
  const auto& p = part.stats;
  if (p.epsilon > 0) s.epsilon = s.epsilon > 0 ? std::min(s.epsilon, p.epsilon) : p.epsilon;
  s.c_scale = std::max(s.c_scale, p.c_scale);
  s.height = std::max(s.height, p.height);
  s.distance_bound = std::max(s.distance_bound, p.distance_bound);
  s.rel_pairs += p.rel_pairs;
  s.proxy_pairs += p.proxy_pairs;
  s.non_canonical_pairs += p.non_canonical_pairs;
  s.safe_paths += p.safe_paths;
  s.endpoints += p.endpoints;
  s.splitting_points += p.splitting_points;
}

inline void finish(Dam& d) {
  std::sort(d.overlay.begin(), d.overlay.end());
  d.overlay.erase(std::unique(d.overlay.begin(), d.overlay.end()), d.overlay.end());
  std::sort(d.minor.vertices.begin(), d.minor.vertices.end());
  std::sort(d.minor.edges.begin(), d.minor.edges.end(), [](const ChainEdge& a, const ChainEdge& b) {
    return std::pair(a.u, a.v) < std::pair(b.u, b.v);
  });
}

/// Overlay edge set -> contracted minor.
inline ChainGraph contract_overlay(const Graph& g, const std::vector<EdgeId>& overlay, const std::vector<Vertex>& terminals) {
  std::vector<ChainEdge> edges;
  edges.reserve(overlay.size());
  for (EdgeId e : overlay) {
    const Edge& ed = g.edge(e);
    edges.push_back({ed.u, ed.v, ed.weight, {ed.u, ed.v}});
  }
  return contract_degree2(edges, terminals);
}

inline std::size_t count_degree_above_two(const Graph& g, const std::vector<EdgeId>& overlay) {
  std::unordered_map<Vertex, int> degree;
  for (EdgeId e : overlay) ++degree[g.edge(e).u], ++degree[g.edge(e).v];
  return static_cast<std::size_t>(std::count_if(degree.begin(), degree.end(), [](const auto& p) { return p.second > 2; }));
}

template <class PerComponent>
Dam build_by_component(const Graph& g, const std::vector<Vertex>& terminals, double epsilon0, PerComponent&& per) {
  const auto start = std::chrono::steady_clock::now();
  Dam out;
  out.terminals = sorted_terminals(g, terminals);
  out.stats.epsilon0 = epsilon0;
  for (const Component& c : terminal_components(g, out.terminals)) {
    Dam part;
    part.terminals = c.terminals;
    if (c.terminals.size() == 1) {
      part.minor.vertices = c.terminals;
    } else {
      per(c, part);
    }
    merge_component(out, part, c);
  }
  finish(out);
  out.stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// The DAM

/// Overlay of the safe paths of every proxy pair of every relevant pair of
/// each terminal, contracted. `ctx` must be built on a connected graph.
inline Dam build_dam(const DamContext& ctx, const std::vector<Vertex>& terminals, int threads = 0) {
  const auto start = std::chrono::steady_clock::now();
  const Graph& g = ctx.graph();
  Dam out;
  out.terminals = detail::sorted_terminals(g, terminals);
  auto& st = out.stats;
  st.epsilon0 = ctx.epsilon0();
  st.epsilon = ctx.epsilon();
  st.c_scale = ctx.c_scale();
  st.height = ctx.hierarchy().height();
  st.distance_bound = ctx.distance_bound();
  if (out.terminals.size() == 1) {
    out.minor.vertices = out.terminals;
    return out;
  }
  const auto& ci = ctx.canonical();
  std::vector<std::vector<CanonicalPair>> proxies(out.terminals.size());
  std::vector<std::size_t> rel_count(out.terminals.size());
  parallel_for(out.terminals.size(), resolve_threads(threads), [&](std::size_t i) {
    auto& mine = proxies[i];
    const auto pairs = ci.rel_pairs(out.terminals[i]);
    rel_count[i] = pairs.size();
    for (const auto& pair : pairs) {
      const auto& r = ctx.proxies().find_proxy_pairs(pair);
      mine.insert(mine.end(), r.proxy.begin(), r.proxy.end());
    }
    std::sort(mine.begin(), mine.end());
    mine.erase(std::unique(mine.begin(), mine.end()), mine.end());
  });
  std::vector<CanonicalPair> all;
  for (std::size_t i = 0; i < proxies.size(); ++i) {
    st.rel_pairs += rel_count[i];
    all.insert(all.end(), proxies[i].begin(), proxies[i].end());
  }
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  st.proxy_pairs = all.size();
  std::set<Vertex> endpoints;
  for (const auto& p : all) {
    if (!p.valid()) ++st.non_canonical_pairs;
    for (const auto& piece : ctx.detours().detour_path(p).safe()) {
      ++st.safe_paths;
      endpoints.insert(piece.front());
      endpoints.insert(piece.back());
      for (std::size_t k = 1; k < piece.size(); ++k) out.overlay.push_back(*g.find_edge(piece[k - 1], piece[k]));
    }
  }
  st.endpoints = endpoints.size();
  std::sort(out.overlay.begin(), out.overlay.end());
  out.overlay.erase(std::unique(out.overlay.begin(), out.overlay.end()), out.overlay.end());
  st.splitting_points = detail::count_degree_above_two(g, out.overlay);
  out.minor = detail::contract_overlay(g, out.overlay, out.terminals);
  st.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

inline Dam build_dam(const Graph& g, const std::vector<Vertex>& terminals, const DamOptions& opt = {}) {
  check_epsilon0(opt.epsilon0);
  return detail::build_by_component(g, terminals, opt.epsilon0, [&](const detail::Component& c, Dam& part) {
    const DamContext ctx(c.graph, opt.epsilon0, opt.c_scale);
    part = build_dam(ctx, c.terminals, opt.threads);
  });
}

// ---------------------------------------------------------------------------
// Baselines

namespace detail {

/// Star pairs (t, p) for p relevant to t, with delta_{owner(p)}(t, p).
struct StarEdge {
  Vertex t, p;
  std::int64_t weight;
};

inline std::vector<StarEdge> star_edges(const CanonicalIndex& ci, const std::vector<Vertex>& terminals) {
  std::vector<StarEdge> out;
  for (Vertex t : terminals)
    for (Vertex p : ci.relevant_portals(t))
      if (p != t) out.push_back({t, p, ci.relevant_distance(t, p)});
  return out;
}

}  // namespace detail

/// Emulator portal epsilon: one portal of scale one above the pair's distance
/// class is relevant to both ends, costing at most 8 eps |P|.
inline double emulator_epsilon(double epsilon0) { return epsilon0 / 8; }

/// Non-minor emulator: terminals joined to their relevant portals, plus
/// consecutive same-scale relevant portals along each separator.
inline Dam build_emulator(const Graph& g, const std::vector<Vertex>& terminals, double epsilon0) {
  check_epsilon0(epsilon0);
  return detail::build_by_component(g, terminals, epsilon0, [&](const detail::Component& c, Dam& part) {
    const double eps = emulator_epsilon(epsilon0);
    const DamContext ctx(c.graph, epsilon0, 1.0, eps);
    const auto& ci = ctx.canonical();
    const auto& h = ctx.hierarchy();
    const auto& pi = ctx.portals();
    part.stats.epsilon = eps;
    part.stats.height = h.height();
    part.stats.distance_bound = ctx.distance_bound();
    std::vector<ChainEdge> edges;
    std::set<Vertex> relevant;
    for (const auto& s : detail::star_edges(ci, c.terminals)) {
      edges.push_back({std::min(s.t, s.p), std::max(s.t, s.p), s.weight, {}});
      relevant.insert(s.p);
    }
    for (Vertex t : c.terminals) relevant.insert(t);
    std::map<RegionId, std::vector<Vertex>> by_region;
    for (Vertex p : relevant) by_region[h.owner(p)].push_back(p);
    std::set<std::pair<Vertex, Vertex>> seen;
    for (auto& [r, ps] : by_region) {
      std::sort(ps.begin(), ps.end(), [&](Vertex x, Vertex y) { return h.position(x) < h.position(y); });
      for (int i = 0; i <= pi.max_scale(); ++i) {
        Vertex prev = kNoVertex;
        for (Vertex p : ps) {
          if (pi.tau(p) < i) continue;
          if (prev != kNoVertex && seen.emplace(std::min(prev, p), std::max(prev, p)).second) {
            edges.push_back({std::min(prev, p), std::max(prev, p), pi.along(prev, p), {}});
          }
          prev = p;
        }
      }
    }
    std::map<std::pair<Vertex, Vertex>, std::int64_t> best;
    for (const auto& e : edges) {
      auto [it, inserted] = best.emplace(std::pair(e.u, e.v), e.weight);
      if (!inserted) it->second = std::min(it->second, e.weight);
    }
    part.minor.vertices.assign(relevant.begin(), relevant.end());
    for (const auto& [k, w] : best) part.minor.edges.push_back({k.first, k.second, w, {}});
    part.stats.rel_pairs = best.size();
  });
}

/// Union of the shortest paths realizing the emulator's star edges, contracted.
inline Dam build_overlay_baseline(const Graph& g, const std::vector<Vertex>& terminals, double epsilon0) {
  check_epsilon0(epsilon0);
  return detail::build_by_component(g, terminals, epsilon0, [&](const detail::Component& c, Dam& part) {
    const double eps = emulator_epsilon(epsilon0);
    const DamContext ctx(c.graph, epsilon0, 1.0, eps);
    const auto& h = ctx.hierarchy();
    part.stats.epsilon = eps;
    part.stats.height = h.height();
    part.stats.distance_bound = ctx.distance_bound();
    const auto stars = detail::star_edges(ctx.canonical(), c.terminals);
    part.stats.safe_paths = stars.size();
    for (const auto& s : stars) {
      const auto p = shortest_path(c.graph, s.t, s.p, h.in_region(h.owner(s.p)));
      for (std::size_t k = 1; k < p->vertices.size(); ++k) part.overlay.push_back(*c.graph.find_edge(p->vertices[k - 1], p->vertices[k]));
    }
    std::sort(part.overlay.begin(), part.overlay.end());
    part.overlay.erase(std::unique(part.overlay.begin(), part.overlay.end()), part.overlay.end());
    part.stats.splitting_points = detail::count_degree_above_two(c.graph, part.overlay);
    part.minor = detail::contract_overlay(c.graph, part.overlay, c.terminals);
  });
}

// ---------------------------------------------------------------------------
// Bootstrapped build

/// |V(M)| / |T| of build_dam, maximized over seeded terminal sets of a unit
/// grid; the default size budget of the bootstrapped build.
inline int calibrate_kappa(double epsilon0 = 0.5, double c_scale = kDefaultCScale, int side = 16, std::size_t count = 8,
                           int samples = 3);

/// calibrate_kappa() with its defaults, rounded up.
inline constexpr int kDefaultKappa = 24;

struct FastOptions {
  double epsilon0 = 0.5;
  double c_scale = kDefaultCScale;
  int kappa = kDefaultKappa;
  int r = 0;           // 0: min(kappa^4, |V|)
  double c_round = 2;  // per-round epsilon0 / (c_round * planned rounds)
  int threads = 0;
};

/// Repeatedly r-divides the current minor, replaces each piece by a DAM for
/// its boundary and terminals, and glues, until fewer than 4 kappa |T|
/// vertices remain, a round makes no progress, or the planned
/// ceil(log2(|V| / (4 kappa |T|))) rounds are spent. Each round runs at
/// eps0 / (c_round * planned rounds), so the stretches compose to 1+eps0.
inline Dam build_dam_fast(const Graph& g, const std::vector<Vertex>& terminals, const FastOptions& opt = {}) {
  check_epsilon0(opt.epsilon0);
  if (opt.kappa < 1) throw PreconditionError("kappa must be positive");
  const auto start = std::chrono::steady_clock::now();
  Dam out;
  out.terminals = detail::sorted_terminals(g, terminals);
  out.stats.epsilon0 = opt.epsilon0;
  out.stats.c_scale = opt.c_scale;
  // components without terminals vanish in the contraction; isolated terminals stay
  ChainGraph current = contract_degree2(chain_graph_of(g).edges, out.terminals);
  out.stats.round_vertices.push_back(current.vertex_count());
  const std::size_t guard = 4 * static_cast<std::size_t>(opt.kappa) * out.terminals.size();
  const int planned =
      current.vertex_count() < guard
          ? 0
          : std::max(1, ceil_log2(static_cast<std::int64_t>((current.vertex_count() + guard - 1) / guard)));
  const double round_eps = planned == 0 ? opt.epsilon0 : opt.epsilon0 / (opt.c_round * planned);
  const int threads = resolve_threads(opt.threads);
  for (int round = 0; round < planned && current.vertex_count() >= guard; ++round) {
    std::vector<Vertex> ids;
    const Graph gi = to_graph(current, &ids);
    std::map<std::pair<Vertex, Vertex>, const std::vector<Vertex>*> chain_of;
    for (const ChainEdge& e : current.edges) chain_of[{e.u, e.v}] = &e.chain;
    const long k4 = static_cast<long>(opt.kappa) * opt.kappa * opt.kappa * opt.kappa;
    const int r = opt.r > 0 ? opt.r : static_cast<int>(std::max<long>(2, std::min<long>(k4, gi.vertex_count())));
    const RDivision div = build_r_division(gi, r);
    std::vector<char> is_terminal(static_cast<std::size_t>(gi.vertex_count()), 0);
    for (Vertex t : out.terminals) {
      is_terminal[static_cast<std::size_t>(std::lower_bound(ids.begin(), ids.end(), t) - ids.begin())] = 1;
    }
    std::vector<std::vector<ChainEdge>> pieces(div.regions.size());
    parallel_for(div.regions.size(), threads, [&](std::size_t i) {
      const auto& verts = div.vertices[i];
      Graph piece(static_cast<Vertex>(verts.size()));
      auto local = [&](Vertex v) { return static_cast<Vertex>(std::lower_bound(verts.begin(), verts.end(), v) - verts.begin()); };
      for (EdgeId e : div.regions[i]) piece.add_edge(local(gi.edge(e).u), local(gi.edge(e).v), gi.edge(e).weight);
      std::vector<Vertex> tr;
      for (std::size_t k = 0; k < verts.size(); ++k) {
        if (div.is_boundary[static_cast<std::size_t>(verts[k])] || is_terminal[static_cast<std::size_t>(verts[k])]) {
          tr.push_back(static_cast<Vertex>(k));
        }
      }
      if (tr.empty()) return;
      const Dam d = build_dam(piece, tr, {round_eps, opt.c_scale, 1});
      for (const ChainEdge& e : d.minor.edges) {
        // piece chain -> current ids -> original chain
        ChainEdge glued{ids[static_cast<std::size_t>(verts[static_cast<std::size_t>(e.u)])],
                        ids[static_cast<std::size_t>(verts[static_cast<std::size_t>(e.v)])], e.weight, {}};
        std::vector<Vertex> hops;
        for (Vertex x : e.chain) hops.push_back(ids[static_cast<std::size_t>(verts[static_cast<std::size_t>(x)])]);
        glued.chain.push_back(hops.front());
        for (std::size_t k = 1; k < hops.size(); ++k) {
          const Vertex a = hops[k - 1], b = hops[k];
          std::vector<Vertex> c = *chain_of.at({std::min(a, b), std::max(a, b)});
          if (c.front() != a) std::reverse(c.begin(), c.end());
          glued.chain.insert(glued.chain.end(), c.begin() + 1, c.end());
        }
        pieces[i].push_back(std::move(glued));
      }
    });
    std::vector<ChainEdge> all;
    for (auto& p : pieces) all.insert(all.end(), std::make_move_iterator(p.begin()), std::make_move_iterator(p.end()));
    ChainGraph next = contract_degree2(all, out.terminals);
    if (next.vertex_count() >= current.vertex_count()) break;
    current = std::move(next);
    out.stats.round_vertices.push_back(current.vertex_count());
  }
  out.stats.epsilon = planned == 0 ? 0 : round_eps;
  for (const ChainEdge& e : current.edges)
    for (std::size_t k = 1; k < e.chain.size(); ++k) out.overlay.push_back(*g.find_edge(e.chain[k - 1], e.chain[k]));
  out.minor = std::move(current);
  detail::finish(out);
  out.stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

inline int calibrate_kappa(double epsilon0, double c_scale, int side, std::size_t count, int samples) {
  Graph g(static_cast<Vertex>(side * side));
  for (int y = 0; y < side; ++y)
    for (int x = 0; x < side; ++x) {
      const Vertex v = static_cast<Vertex>(y * side + x);
      if (x + 1 < side) g.add_edge(v, v + 1, 1);
      if (y + 1 < side) g.add_edge(v, v + side, 1);
    }
  const DamContext ctx(g, epsilon0, c_scale);
  double worst = 1;
  for (int s = 0; s < samples; ++s) {
    std::mt19937_64 rng(static_cast<std::uint64_t>(s) + 1);
    std::vector<Vertex> all(static_cast<std::size_t>(g.vertex_count()));
    std::iota(all.begin(), all.end(), 0);
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(count);
    const Dam d = build_dam(ctx, all, 1);
    worst = std::max(worst, static_cast<double>(d.minor.vertex_count()) / static_cast<double>(d.terminals.size()));
  }
  return static_cast<int>(std::ceil(worst));
}

}  // namespace damkit
