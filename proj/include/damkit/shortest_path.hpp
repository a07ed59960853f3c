#pragma once

#include <cstdint>
#include <cstring>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "damkit/graph.hpp"
#include "damkit/path.hpp"

namespace damkit {

/// Dense membership mask over graph vertices; callable as an `allowed` predicate.
class VertexMask {
 public:
  VertexMask() = default;
  explicit VertexMask(Vertex n, bool value = false) : bits_(static_cast<std::size_t>(n), value ? 1 : 0) {}

  static VertexMask all(Vertex n) { return VertexMask(n, true); }
  static VertexMask of(Vertex n, std::span<const Vertex> members) {
    VertexMask m(n);
    for (Vertex v : members) m.insert(v);
    return m;
  }

  void insert(Vertex v) { bits_[static_cast<std::size_t>(v)] = 1; }
  void erase(Vertex v) { bits_[static_cast<std::size_t>(v)] = 0; }
  bool contains(Vertex v) const { return bits_[static_cast<std::size_t>(v)] != 0; }
  bool operator()(Vertex v) const { return contains(v); }
  Vertex size() const { return static_cast<Vertex>(bits_.size()); }

 private:
  std::vector<char> bits_;
};

inline constexpr std::int64_t kNoRadius = std::numeric_limits<std::int64_t>::max();

namespace detail {

/// Indexed binary min-heap over vertices with an external key comparator.
class VertexHeap {
 public:
  void reset(std::size_t n) {
    if (pos_.size() < n) pos_.assign(n, -1);
    for (Vertex v : heap_) pos_[static_cast<std::size_t>(v)] = -1;
    heap_.clear();
  }
  bool empty() const { return heap_.empty(); }

  template <class Less>
  void push_or_decrease(Vertex v, Less&& less) {
    auto& p = pos_[static_cast<std::size_t>(v)];
    if (p < 0) {
      p = static_cast<int>(heap_.size());
      heap_.push_back(v);
    }
    sift_up(static_cast<std::size_t>(p), less);
  }

  template <class Less>
  Vertex pop(Less&& less) {
    const Vertex top = heap_.front();
    pos_[static_cast<std::size_t>(top)] = -1;
    const Vertex last = heap_.back();
    heap_.pop_back();
    if (!heap_.empty()) {
      heap_[0] = last;
      pos_[static_cast<std::size_t>(last)] = 0;
      sift_down(0, less);
    }
    return top;
  }

 private:
  template <class Less>
  void sift_up(std::size_t i, Less& less) {
    const Vertex v = heap_[i];
    while (i > 0) {
      const std::size_t parent = (i - 1) / 2;
      if (!less(v, heap_[parent])) break;
      heap_[i] = heap_[parent];
      pos_[static_cast<std::size_t>(heap_[i])] = static_cast<int>(i);
      i = parent;
    }
    heap_[i] = v;
    pos_[static_cast<std::size_t>(v)] = static_cast<int>(i);
  }

  template <class Less>
  void sift_down(std::size_t i, Less& less) {
    const Vertex v = heap_[i];
    const std::size_t n = heap_.size();
    while (true) {
      std::size_t child = 2 * i + 1;
      if (child >= n) break;
      if (child + 1 < n && less(heap_[child + 1], heap_[child])) ++child;
      if (!less(heap_[child], v)) break;
      heap_[i] = heap_[child];
      pos_[static_cast<std::size_t>(heap_[i])] = static_cast<int>(i);
      i = child;
    }
    heap_[i] = v;
    pos_[static_cast<std::size_t>(v)] = static_cast<int>(i);
  }

  std::vector<Vertex> heap_;
  std::vector<int> pos_;
};

}  // namespace detail

/// Dijkstra under perturbed weights, restricted to vertices accepted by an
/// `allowed` predicate. Tiebreaks live in a flat arena of fixed width, which
/// suffices for simple paths. Results stay valid until the next `run`.
class PerturbedDijkstra {
 public:
  struct Options {
    Vertex target = kNoVertex;          // stop once this vertex is settled
    std::int64_t radius = kNoRadius;    // ignore vertices with base distance above this
  };

  template <class Allowed>
  void run(const Graph& g, std::span<const Vertex> sources, const Allowed& allowed, Options opt = {}) {
    prepare(g);
    for (Vertex s : sources) {
      if (!allowed(s)) throw PreconditionError("source " + std::to_string(s) + " outside the allowed set");
      if (is_reached(s)) continue;
      touch(s);
      base_[idx(s)] = 0;
      std::fill_n(tb_ptr(s), words_, 0);
      parent_[idx(s)] = kNoVertex;
      source_[idx(s)] = s;
      heap_.push_or_decrease(s, less_);
    }
    while (!heap_.empty()) {
      const Vertex u = heap_.pop(less_);
      settled_[idx(u)] = epoch_;
      order_.push_back(u);
      if (u == opt.target) break;
      for (const Arc& arc : g.neighbors(u)) {
        const Vertex v = arc.to;
        if (is_settled(v) || !allowed(v)) continue;
        const std::int64_t nb = base_[idx(u)] + g.edge(arc.edge).weight;
        if (nb > opt.radius) continue;
        const bool reached = is_reached(v);
        if (reached && nb > base_[idx(v)]) continue;
        std::memcpy(scratch_.data(), tb_ptr(u), words_ * sizeof(std::uint64_t));
        add_bit(scratch_.data(), g.tiebreak_position(arc.edge));
        if (reached && nb == base_[idx(v)] && !words_less(scratch_.data(), tb_ptr(v))) continue;
        if (!reached) touch(v);
        base_[idx(v)] = nb;
        std::memcpy(tb_ptr(v), scratch_.data(), words_ * sizeof(std::uint64_t));
        parent_[idx(v)] = u;
        source_[idx(v)] = source_[idx(u)];
        heap_.push_or_decrease(v, less_);
      }
    }
  }

  template <class Allowed>
  void run(const Graph& g, Vertex source, const Allowed& allowed, Options opt = {}) {
    const Vertex s[1] = {source};
    run(g, std::span<const Vertex>(s, 1), allowed, opt);
  }

  /// Vertex has a final distance (settled before the search stopped).
  bool settled(Vertex v) const { return is_settled(v); }
  std::int64_t base(Vertex v) const { return base_[idx(v)]; }
  PerturbedWeight distance(Vertex v) const {
    return PerturbedWeight(base_[idx(v)], Tiebreak::from_words({tb_ptr(v), words_}));
  }
  Vertex parent(Vertex v) const { return parent_[idx(v)]; }
  Vertex source_of(Vertex v) const { return source_[idx(v)]; }
  /// Settled vertices in nondecreasing distance order.
  const std::vector<Vertex>& settled_order() const { return order_; }

  /// Tree path from the source that reached `v` to `v`.
  std::vector<Vertex> path_to(Vertex v) const {
    std::vector<Vertex> out;
    for (Vertex x = v; x != kNoVertex; x = parent_[idx(x)]) out.push_back(x);
    std::reverse(out.begin(), out.end());
    return out;
  }

  Path tree_path(Vertex v) const {
    Path p;
    p.vertices = path_to(v);
    p.length = distance(v);
    return p;
  }

 private:
  static std::size_t idx(Vertex v) { return static_cast<std::size_t>(v); }
  std::uint64_t* tb_ptr(Vertex v) { return tb_.data() + idx(v) * words_; }
  const std::uint64_t* tb_ptr(Vertex v) const { return tb_.data() + idx(v) * words_; }

  bool is_reached(Vertex v) const { return stamp_[idx(v)] == epoch_; }
  bool is_settled(Vertex v) const { return settled_[idx(v)] == epoch_; }
  void touch(Vertex v) { stamp_[idx(v)] = epoch_; }

  void add_bit(std::uint64_t* w, std::size_t position) const {
    std::size_t i = position / 64;
    std::uint64_t add = std::uint64_t{1} << (position % 64);
    while (i < words_ && add) {
      const std::uint64_t s = w[i] + add;
      add = s < add ? 1 : 0;
      w[i] = s;
      ++i;
    }
  }

  bool words_less(const std::uint64_t* a, const std::uint64_t* b) const {
    for (std::size_t i = words_; i-- > 0;) {
      if (a[i] != b[i]) return a[i] < b[i];
    }
    return false;
  }

  void prepare(const Graph& g) {
    const auto n = static_cast<std::size_t>(g.vertex_count());
    words_ = g.tiebreak_words();
    if (base_.size() < n) {
      base_.resize(n);
      parent_.resize(n);
      source_.resize(n);
      stamp_.resize(n, 0);
      settled_.resize(n, 0);
    }
    if (tb_.size() < n * words_) tb_.resize(n * words_);
    scratch_.assign(words_, 0);
    if (++epoch_ == 0) {
      std::fill(stamp_.begin(), stamp_.end(), 0);
      std::fill(settled_.begin(), settled_.end(), 0);
      epoch_ = 1;
    }
    heap_.reset(n);
    order_.clear();
  }

  std::size_t words_ = 1;
  std::vector<std::int64_t> base_;
  std::vector<std::uint64_t> tb_;
  std::vector<Vertex> parent_;
  std::vector<Vertex> source_;
  std::vector<std::uint32_t> stamp_;
  std::vector<std::uint32_t> settled_;
  std::vector<std::uint64_t> scratch_;
  std::vector<Vertex> order_;
  std::uint32_t epoch_ = 0;
  detail::VertexHeap heap_;
  struct Less {
    const PerturbedDijkstra* self;
    bool operator()(Vertex a, Vertex b) const {
      const auto ba = self->base_[idx(a)], bb = self->base_[idx(b)];
      if (ba != bb) return ba < bb;
      return self->words_less(self->tb_ptr(a), self->tb_ptr(b));
    }
  } less_{this};
};

/// Dijkstra on base weights only; cheap distance queries where unique paths
/// are not needed (threshold tests against scalar bounds).
class BaseDijkstra {
 public:
  using Options = PerturbedDijkstra::Options;

  template <class Allowed>
  void run(const Graph& g, std::span<const Vertex> sources, const Allowed& allowed, Options opt = {}) {
    prepare(g);
    for (Vertex s : sources) {
      if (!allowed(s)) throw PreconditionError("source " + std::to_string(s) + " outside the allowed set");
      if (is_reached(s)) continue;
      stamp_[idx(s)] = epoch_;
      base_[idx(s)] = 0;
      heap_.push_or_decrease(s, less_);
    }
    while (!heap_.empty()) {
      const Vertex u = heap_.pop(less_);
      settled_[idx(u)] = epoch_;
      order_.push_back(u);
      if (u == opt.target) break;
      for (const Arc& arc : g.neighbors(u)) {
        const Vertex v = arc.to;
        if (is_settled(v) || !allowed(v)) continue;
        const std::int64_t nb = base_[idx(u)] + g.edge(arc.edge).weight;
        if (nb > opt.radius) continue;
        if (is_reached(v) && nb >= base_[idx(v)]) continue;
        stamp_[idx(v)] = epoch_;
        base_[idx(v)] = nb;
        heap_.push_or_decrease(v, less_);
      }
    }
  }

  template <class Allowed>
  void run(const Graph& g, Vertex source, const Allowed& allowed, Options opt = {}) {
    const Vertex s[1] = {source};
    run(g, std::span<const Vertex>(s, 1), allowed, opt);
  }

  bool settled(Vertex v) const { return is_settled(v); }
  std::int64_t base(Vertex v) const { return base_[idx(v)]; }
  std::optional<std::int64_t> distance(Vertex v) const {
    if (!is_settled(v)) return std::nullopt;
    return base_[idx(v)];
  }
  const std::vector<Vertex>& settled_order() const { return order_; }

 private:
  static std::size_t idx(Vertex v) { return static_cast<std::size_t>(v); }
  bool is_reached(Vertex v) const { return stamp_[idx(v)] == epoch_; }
  bool is_settled(Vertex v) const { return settled_[idx(v)] == epoch_; }

  void prepare(const Graph& g) {
    const auto n = static_cast<std::size_t>(g.vertex_count());
    if (base_.size() < n) {
      base_.resize(n);
      stamp_.resize(n, 0);
      settled_.resize(n, 0);
    }
    if (++epoch_ == 0) {
      std::fill(stamp_.begin(), stamp_.end(), 0);
      std::fill(settled_.begin(), settled_.end(), 0);
      epoch_ = 1;
    }
    heap_.reset(n);
    order_.clear();
  }

  std::vector<std::int64_t> base_;
  std::vector<std::uint32_t> stamp_;
  std::vector<std::uint32_t> settled_;
  std::vector<Vertex> order_;
  std::uint32_t epoch_ = 0;
  detail::VertexHeap heap_;
  struct Less {
    const BaseDijkstra* self;
    bool operator()(Vertex a, Vertex b) const { return self->base_[idx(a)] < self->base_[idx(b)]; }
  } less_{this};
};

/// Per-thread search engines; a search's results are only read before the
/// next search on the same thread.
inline PerturbedDijkstra& thread_perturbed_dijkstra() {
  thread_local PerturbedDijkstra engine;
  return engine;
}
inline BaseDijkstra& thread_base_dijkstra() {
  thread_local BaseDijkstra engine;
  return engine;
}

/// The unique minimum-PerturbedWeight path from `source` to `target` inside
/// the subgraph induced by `allowed`, or nullopt when disconnected there.
template <class Allowed>
std::optional<Path> shortest_path(const Graph& g, Vertex source, Vertex target, const Allowed& allowed) {
  if (!g.valid_vertex(source) || !g.valid_vertex(target)) throw PreconditionError("vertex out of range");
  if (!allowed(source) || !allowed(target)) throw PreconditionError("source/target outside the allowed set");
  auto& engine = thread_perturbed_dijkstra();
  engine.run(g, source, allowed, {target, kNoRadius});
  if (!engine.settled(target)) return std::nullopt;
  return engine.tree_path(target);
}

inline std::optional<Path> shortest_path(const Graph& g, Vertex source, Vertex target) {
  return shortest_path(g, source, target, [](Vertex) { return true; });
}

/// Exact single-source distances within the induced subgraph; unreachable
/// vertices are absent (nullopt).
template <class Allowed>
std::vector<std::optional<PerturbedWeight>> sssp_distances(const Graph& g, Vertex source, const Allowed& allowed) {
  if (!g.valid_vertex(source)) throw PreconditionError("vertex out of range");
  if (!allowed(source)) throw PreconditionError("source outside the allowed set");
  PerturbedDijkstra engine;
  engine.run(g, source, allowed);
  std::vector<std::optional<PerturbedWeight>> out(static_cast<std::size_t>(g.vertex_count()));
  for (Vertex v : engine.settled_order()) out[static_cast<std::size_t>(v)] = engine.distance(v);
  return out;
}

/// Base-weight single-source distances (tiebreaks dropped).
template <class Allowed>
std::vector<std::optional<std::int64_t>> base_distances(const Graph& g, Vertex source, const Allowed& allowed) {
  auto& engine = thread_base_dijkstra();
  engine.run(g, source, allowed);
  std::vector<std::optional<std::int64_t>> out(static_cast<std::size_t>(g.vertex_count()));
  for (Vertex v : engine.settled_order()) out[static_cast<std::size_t>(v)] = engine.base(v);
  return out;
}

inline std::vector<std::optional<std::int64_t>> base_distances(const Graph& g, Vertex source) {
  return base_distances(g, source, [](Vertex) { return true; });
}

/// Connected components; returns per-vertex component id and the count.
inline std::pair<std::vector<int>, int> connected_components(const Graph& g) {
  std::vector<int> comp(static_cast<std::size_t>(g.vertex_count()), -1);
  int count = 0;
  std::vector<Vertex> stack;
  for (Vertex s = 0; s < g.vertex_count(); ++s) {
    if (comp[static_cast<std::size_t>(s)] >= 0) continue;
    comp[static_cast<std::size_t>(s)] = count;
    stack.push_back(s);
    while (!stack.empty()) {
      const Vertex u = stack.back();
      stack.pop_back();
      for (const Arc& a : g.neighbors(u)) {
        if (comp[static_cast<std::size_t>(a.to)] < 0) {
          comp[static_cast<std::size_t>(a.to)] = count;
          stack.push_back(a.to);
        }
      }
    }
    ++count;
  }
  return {std::move(comp), count};
}

}  // namespace damkit
