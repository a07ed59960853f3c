#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "damkit/perturbed_weight.hpp"

namespace damkit {

using Vertex = std::int32_t;
using EdgeId = std::int32_t;

inline constexpr Vertex kNoVertex = -1;

/// Malformed or unsupported input (bad files, nonpositive weights, ...).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller violated an operation's precondition.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct Edge {
  Vertex u = 0;
  Vertex v = 0;
  std::int64_t weight = 1;  // base weight in graph units

  Vertex other(Vertex x) const { return x == u ? v : u; }
};

struct Arc {
  Vertex to;
  EdgeId edge;
};

/// Exact decimal value mantissa / 10^decimals.
struct Decimal {
  std::int64_t mantissa = 0;
  int decimals = 0;

  static Decimal parse(std::string_view text) {
    if (text.empty()) throw InputError("empty number");
    Decimal d;
    bool seen_dot = false;
    bool any_digit = false;
    std::size_t i = 0;
    if (text[0] == '+') i = 1;
    if (i < text.size() && text[i] == '-') throw InputError("negative weight '" + std::string(text) + "'");
    for (; i < text.size(); ++i) {
      const char c = text[i];
      if (c == '.') {
        if (seen_dot) throw InputError("malformed number '" + std::string(text) + "'");
        seen_dot = true;
        continue;
      }
      if (c < '0' || c > '9') throw InputError("malformed number '" + std::string(text) + "'");
      any_digit = true;
      if (d.mantissa > (INT64_MAX - 9) / 10) throw InputError("number out of range '" + std::string(text) + "'");
      d.mantissa = d.mantissa * 10 + (c - '0');
      if (seen_dot) ++d.decimals;
    }
    if (!any_digit) throw InputError("malformed number '" + std::string(text) + "'");
    if (d.decimals > 12) throw InputError("too many decimal places in '" + std::string(text) + "'");
    return d;
  }
};

inline std::int64_t pow10_i64(int k) {
  std::int64_t r = 1;
  while (k-- > 0) r *= 10;
  return r;
}

/// Real value of one base weight unit: numerator / 10^decimals.
struct WeightUnit {
  std::int64_t numerator = 1;
  int decimals = 0;

  friend bool operator==(const WeightUnit&, const WeightUnit&) = default;

  /// Exact decimal rendering of `base` units.
  std::string format(std::int64_t base) const {
    __int128 value = static_cast<__int128>(base) * numerator;
    const bool negative = value < 0;
    if (negative) value = -value;
    std::string digits;
    do {
      digits.push_back(static_cast<char>('0' + static_cast<int>(value % 10)));
      value /= 10;
    } while (value > 0);
    while (static_cast<int>(digits.size()) <= decimals) digits.push_back('0');
    std::reverse(digits.begin(), digits.end());
    std::string out = negative ? "-" : "";
    if (decimals == 0) return out + digits;
    std::string int_part = digits.substr(0, digits.size() - static_cast<std::size_t>(decimals));
    std::string frac = digits.substr(digits.size() - static_cast<std::size_t>(decimals));
    while (!frac.empty() && frac.back() == '0') frac.pop_back();
    out += int_part;
    if (!frac.empty()) out += "." + frac;
    return out;
  }

  double to_double(std::int64_t base) const {
    return static_cast<double>(base) * static_cast<double>(numerator) / static_cast<double>(pow10_i64(decimals));
  }
};

/// Undirected simple graph with positive integer base weights. Edge ids are
/// dense and follow insertion order; the i-th edge carries tiebreak bit
/// 2^(|E| - i), which makes every simple path length distinct.
class Graph {
 public:
  Graph() = default;
  explicit Graph(Vertex n) : adjacency_(static_cast<std::size_t>(n)) {
    if (n < 0) throw PreconditionError("negative vertex count");
  }

  /// Builds a graph from decimal weight strings, rescaling every weight by the
  /// common power of ten and then dividing by the gcd.
  static Graph from_decimal_edges(Vertex n, const std::vector<std::tuple<Vertex, Vertex, std::string>>& edges) {
    std::vector<Decimal> parsed;
    parsed.reserve(edges.size());
    int decimals = 0;
    for (const auto& e : edges) {
      parsed.push_back(Decimal::parse(std::get<2>(e)));
      decimals = std::max(decimals, parsed.back().decimals);
    }
    Graph g(n);
    for (std::size_t i = 0; i < edges.size(); ++i) {
      const auto scaled = parsed[i].mantissa * pow10_i64(decimals - parsed[i].decimals);
      g.add_edge(std::get<0>(edges[i]), std::get<1>(edges[i]), scaled);
    }
    g.unit_ = WeightUnit{1, decimals};
    return g.normalized();
  }

  Vertex vertex_count() const { return static_cast<Vertex>(adjacency_.size()); }
  EdgeId edge_count() const { return static_cast<EdgeId>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(EdgeId e) const { return edges_[static_cast<std::size_t>(e)]; }
  std::span<const Arc> neighbors(Vertex v) const { return adjacency_[static_cast<std::size_t>(v)]; }
  std::size_t degree(Vertex v) const { return adjacency_[static_cast<std::size_t>(v)].size(); }
  const WeightUnit& unit() const { return unit_; }
  void set_unit(WeightUnit u) { unit_ = u; }

  bool valid_vertex(Vertex v) const { return v >= 0 && v < vertex_count(); }

  EdgeId add_edge(Vertex u, Vertex v, std::int64_t weight) {
    if (!valid_vertex(u) || !valid_vertex(v)) {
      throw InputError("edge endpoint out of range (" + std::to_string(u) + ", " + std::to_string(v) + ")");
    }
    if (u == v) throw InputError("self-loop at vertex " + std::to_string(u));
    if (weight <= 0) throw InputError("nonpositive weight on edge (" + std::to_string(u) + ", " + std::to_string(v) + ")");
    if (find_edge(u, v)) {
      throw InputError("duplicate edge (" + std::to_string(u) + ", " + std::to_string(v) + ")");
    }
    const auto id = static_cast<EdgeId>(edges_.size());
    edges_.push_back({u, v, weight});
    adjacency_[static_cast<std::size_t>(u)].push_back({v, id});
    adjacency_[static_cast<std::size_t>(v)].push_back({u, id});
    return id;
  }

  std::optional<EdgeId> find_edge(Vertex u, Vertex v) const {
    if (!valid_vertex(u) || !valid_vertex(v)) return std::nullopt;
    const auto& a = adjacency_[static_cast<std::size_t>(u)];
    const auto& b = adjacency_[static_cast<std::size_t>(v)];
    const auto& scan = a.size() <= b.size() ? a : b;
    const Vertex target = a.size() <= b.size() ? v : u;
    for (const Arc& arc : scan) {
      if (arc.to == target) return arc.edge;
    }
    return std::nullopt;
  }

  /// Bit position of the edge's tiebreak term: 2^(|E| - id).
  std::size_t tiebreak_position(EdgeId e) const { return static_cast<std::size_t>(edge_count() - e); }

  PerturbedWeight edge_weight(EdgeId e) const {
    return PerturbedWeight(edge(e).weight, Tiebreak::bit(tiebreak_position(e)));
  }

  /// Number of 64-bit words that hold the tiebreak of any simple path.
  std::size_t tiebreak_words() const { return static_cast<std::size_t>(edge_count()) / 64 + 1; }

  std::int64_t min_weight() const {
    std::int64_t m = 0;
    for (const auto& e : edges_) m = (m == 0) ? e.weight : std::min(m, e.weight);
    return m;
  }
  std::int64_t max_weight() const {
    std::int64_t m = 0;
    for (const auto& e : edges_) m = std::max(m, e.weight);
    return m;
  }

  /// Copy with base weights divided by their gcd (unit adjusted so real
  /// weights are unchanged).
  Graph normalized() const {
    Graph g = *this;
    std::int64_t d = 0;
    for (const auto& e : edges_) {
      if (e.weight <= 0) throw InputError("nonpositive weight");
      d = std::gcd(d, e.weight);
    }
    if (d > 1) {
      for (auto& e : g.edges_) e.weight /= d;
      g.unit_.numerator *= d;
    }
    return g;
  }

 private:
  std::vector<Edge> edges_;
  std::vector<std::vector<Arc>> adjacency_;
  WeightUnit unit_{};
};

/// Validates weights, divides them by their gcd, and fixes the edge order that
/// defines the lexicographic tiebreak. The result has unique simple-path
/// lengths under `PerturbedWeight` comparison.
inline Graph normalize_and_perturb(const Graph& g) { return g.normalized(); }

}  // namespace damkit
