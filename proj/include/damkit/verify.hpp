#pragma once

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "damkit/dam.hpp"

namespace damkit {

// ---------------------------------------------------------------------------
// Oracles

/// Distances among `terminals` in the order given; nullopt across components.
struct TerminalDistances {
  std::vector<Vertex> terminals;
  std::vector<std::vector<std::optional<std::int64_t>>> d;
};

/// Exact base-weight distances by one Dijkstra per terminal.
inline TerminalDistances brute_force_distances(const Graph& g, const std::vector<Vertex>& terminals, int threads = 1) {
  TerminalDistances out{terminals, std::vector<std::vector<std::optional<std::int64_t>>>(terminals.size())};
  for (Vertex t : terminals)
    if (!g.valid_vertex(t)) throw PreconditionError("terminal " + std::to_string(t) + " out of range");
  parallel_for(terminals.size(), threads, [&](std::size_t i) {
    const auto all = base_distances(g, terminals[i]);
    for (Vertex t : terminals) out.d[i].push_back(all[static_cast<std::size_t>(t)]);
  });
  return out;
}

/// Terminal distances inside a sketch (minor or emulator).
inline TerminalDistances sketch_distances(const ChainGraph& sketch, const std::vector<Vertex>& terminals) {
  return {terminals, terminal_distances(sketch, terminals)};
}

// ---------------------------------------------------------------------------
// Stretch

struct PairStretch {
  Vertex s, t;
  std::int64_t graph;   // delta_G
  std::int64_t sketch;  // delta of the sketch; -1 when the sketch disconnects the pair
  double ratio;         // infinity when disconnected in the sketch only
};

struct StretchReport {
  std::vector<PairStretch> pairs;  // s < t in terminal order, connected in G
  double max_ratio = 1.0;
  std::vector<PairStretch> below_one;  // hard failures: the sketch shortens a distance
  std::size_t spurious_pairs = 0;      // connected in the sketch but not in G (also a hard failure)
  // size metrics, filled by the caller when known
  std::size_t vertices = 0, edges = 0, paths = 0, splitting_points = 0;

  bool hard_failure() const { return !below_one.empty() || spurious_pairs > 0; }
  std::vector<PairStretch> above(double alpha) const {
    std::vector<PairStretch> out;
    for (const auto& p : pairs)
      if (p.ratio > alpha) out.push_back(p);
    return out;
  }
};

/// Per-pair ratios of sketch over oracle distances. Terminal lists must agree.
inline StretchReport measure_stretch(const TerminalDistances& sketch, const TerminalDistances& oracle) {
  if (sketch.terminals != oracle.terminals) throw PreconditionError("sketch and oracle terminal sets differ");
  StretchReport r;
  const std::size_t k = oracle.terminals.size();
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      const auto& g = oracle.d[i][j];
      const auto& s = sketch.d[i][j];
      if (!g) {
        if (s) ++r.spurious_pairs;
        continue;
      }
      PairStretch p{oracle.terminals[i], oracle.terminals[j], *g, s ? *s : -1, 0};
      if (!s) {
        p.ratio = std::numeric_limits<double>::infinity();
      } else if (*g == 0) {
        p.ratio = *s == 0 ? 1.0 : std::numeric_limits<double>::infinity();
      } else {
        p.ratio = static_cast<double>(*s) / static_cast<double>(*g);
      }
      if (s && *s < *g) r.below_one.push_back(p);
      r.max_ratio = std::max(r.max_ratio, p.ratio);
      r.pairs.push_back(p);
    }
  }
  return r;
}

inline StretchReport measure_stretch(const Graph& g, const Dam& d) {
  auto r = measure_stretch(sketch_distances(d.minor, d.terminals), brute_force_distances(g, d.terminals));
  r.vertices = d.minor.vertex_count();
  r.edges = d.minor.edge_count();
  r.paths = d.stats.safe_paths;
  r.splitting_points = d.stats.splitting_points;
  return r;
}

inline void write_stretch_csv(std::ostream& os, const StretchReport& r, const WeightUnit& unit = {}) {
  os << "s,t,graph,sketch,ratio\n";
  for (const auto& p : r.pairs) {
    os << p.s << ',' << p.t << ',' << unit.format(p.graph) << ',' << (p.sketch < 0 ? "inf" : unit.format(p.sketch)) << ',';
    if (std::isinf(p.ratio)) {
      os << "inf\n";
    } else {
      os << std::setprecision(9) << p.ratio << '\n';
    }
  }
}

inline void write_stretch_summary(std::ostream& os, const StretchReport& r, double alpha) {
  os << "pairs " << r.pairs.size() << "\n";
  os << "max_ratio " << std::setprecision(9) << r.max_ratio << "\n";
  os << "bound " << alpha << (r.max_ratio <= alpha ? " met" : " exceeded") << "\n";
  os << "below_one " << r.below_one.size() << "\n";
  os << "spurious " << r.spurious_pairs << "\n";
  os << "vertices " << r.vertices << "\nedges " << r.edges << "\npaths " << r.paths << "\nsplitting_points "
     << r.splitting_points << "\n";
  for (const auto& p : r.below_one) os << "shortened " << p.s << ' ' << p.t << ' ' << p.sketch << " < " << p.graph << "\n";
  os << (r.hard_failure() ? "FAIL" : "OK") << "\n";
}

// ---------------------------------------------------------------------------
// Domain replacement

/// Lowest ancestor-or-self of `r` containing both vertices.
inline RegionId domain_of(const SeparatorHierarchy& h, RegionId r, Vertex x, Vertex y) {
  for (RegionId q = r;; q = h.region(q).parent) {
    if (h.contains(q, x) && h.contains(q, y)) return q;
    if (q == h.root()) return q;
  }
}

/// Replaces each index range [begin, end] of `path` by the shortest path
/// between its endpoints in its domain with respect to `r`. Ranges must be
/// edge-disjoint; touching at an endpoint is fine.
inline std::vector<Vertex> domain_replacement(const Graph& g, const SeparatorHierarchy& h, const std::vector<Vertex>& path,
                                              std::vector<std::pair<std::size_t, std::size_t>> ranges, RegionId r) {
  std::sort(ranges.begin(), ranges.end());
  for (std::size_t i = 0; i < ranges.size(); ++i) {
    const auto [b, e] = ranges[i];
    if (b >= e || e >= path.size()) throw PreconditionError("subpath range out of bounds");
    if (i > 0 && ranges[i - 1].second > b) throw PreconditionError("subpaths overlap");
  }
  std::vector<Vertex> out;
  std::size_t at = 0;
  for (const auto& [b, e] : ranges) {
    out.insert(out.end(), path.begin() + static_cast<std::ptrdiff_t>(at), path.begin() + static_cast<std::ptrdiff_t>(b));
    const RegionId dom = domain_of(h, r, path[b], path[e]);
    const auto p = shortest_path(g, path[b], path[e], h.in_region(dom));
    if (!p) throw PreconditionError("subpath endpoints disconnected in their domain");
    out.insert(out.end(), p->vertices.begin(), p->vertices.end() - 1);
    at = e;
  }
  out.insert(out.end(), path.begin() + static_cast<std::ptrdiff_t>(at), path.end());
  return out;
}

// ---------------------------------------------------------------------------
// Minor validation

struct MinorReport {
  std::vector<std::string> problems;
  std::vector<std::pair<Vertex, Vertex>> foreign_edges;  // certificate steps that are not edges of G
  bool ok() const { return problems.empty(); }
};

inline MinorReport verify_minor(const Dam& dam, const Graph& g) {
  MinorReport rep;
  auto problem = [&](std::string s) { rep.problems.push_back(std::move(s)); };
  std::set<Vertex> vs(dam.minor.vertices.begin(), dam.minor.vertices.end());
  for (Vertex v : dam.minor.vertices)
    if (!g.valid_vertex(v)) problem("minor vertex " + std::to_string(v) + " not in G");
  for (Vertex t : dam.terminals)
    if (!vs.count(t)) problem("terminal " + std::to_string(t) + " missing from the minor");
  std::set<EdgeId> overlay;
  for (EdgeId e : dam.overlay) {
    if (e < 0 || e >= g.edge_count()) {
      problem("overlay edge id " + std::to_string(e) + " not in G");
    } else {
      overlay.insert(e);
    }
  }
  std::map<Vertex, int> degree;
  std::vector<ChainEdge> expanded;
  std::set<EdgeId> used;
  for (const ChainEdge& e : dam.minor.edges) {
    const std::string name = "edge " + std::to_string(e.u) + "-" + std::to_string(e.v);
    ++degree[e.u], ++degree[e.v];
    if (!vs.count(e.u) || !vs.count(e.v)) problem(name + " has an endpoint outside the minor");
    if (e.chain.size() < 2 || e.chain.front() != e.u || e.chain.back() != e.v) {
      problem(name + " certificate does not run from u to v");
      continue;
    }
    std::int64_t len = 0;
    bool foreign = false;
    for (std::size_t k = 1; k < e.chain.size(); ++k) {
      const Vertex a = e.chain[k - 1], b = e.chain[k];
      const auto id = g.valid_vertex(a) && g.valid_vertex(b) ? g.find_edge(a, b) : std::nullopt;
      if (!id) {
        rep.foreign_edges.emplace_back(a, b);
        problem(name + " certificate uses foreign edge " + std::to_string(a) + "-" + std::to_string(b));
        foreign = true;
        continue;
      }
      if (!overlay.count(*id)) problem(name + " certificate edge " + std::to_string(a) + "-" + std::to_string(b) + " not in M");
      len += g.edge(*id).weight;
      used.insert(*id);
      expanded.push_back({a, b, g.edge(*id).weight, {a, b}});
    }
    if (!foreign && len != e.weight) {
      problem(name + " weight " + std::to_string(e.weight) + " differs from certificate length " + std::to_string(len));
    }
    for (std::size_t k = 1; k + 1 < e.chain.size(); ++k) {
      if (vs.count(e.chain[k])) problem(name + " certificate passes through minor vertex " + std::to_string(e.chain[k]));
    }
  }
  for (const auto& [v, deg] : degree) {
    if (deg == 2 && !std::binary_search(dam.terminals.begin(), dam.terminals.end(), v)) {
      problem("non-terminal " + std::to_string(v) + " has degree 2");
    }
  }
  if (!rep.ok()) return rep;
  // round trip: contracting the expansion gives the minor back
  const ChainGraph again = contract_degree2(expanded, dam.terminals);
  if (again != dam.minor) problem("contracting the certificate expansion does not reproduce the minor");
  // every piece of the expansion reaches a terminal
  std::map<Vertex, Vertex> parent;
  for (Vertex v : vs) parent[v] = v;
  for (const ChainEdge& e : expanded) parent.emplace(e.u, e.u), parent.emplace(e.v, e.v);
  auto find = [&](Vertex v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  for (const ChainEdge& e : expanded) parent[find(e.u)] = find(e.v);
  std::set<Vertex> with_terminal;
  for (Vertex t : dam.terminals) with_terminal.insert(find(t));
  for (const auto& [v, p] : parent) {
    if (!with_terminal.count(find(v))) {
      problem("vertex " + std::to_string(v) + " lies in a piece without terminals");
      break;
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Constants ledger: name value pairs measured per corpus, alarmed at 2x drift

inline std::map<std::string, double> read_constants_ledger(std::istream& is) {
  std::map<std::string, double> out;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string name;
    double v;
    if (ls >> name >> v) out[name] = v;
  }
  return out;
}

/// Drift alarm: a measured constant more than `factor` times its recorded value.
inline bool drifted(double measured, double recorded, double factor = 2.0) { return measured > factor * recorded; }

}  // namespace damkit
