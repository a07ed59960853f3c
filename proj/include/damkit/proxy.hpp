#pragma once

#include <algorithm>
#include <vector>

#include "damkit/detour.hpp"

namespace damkit {

struct ProxyResult {
  CanonicalPair pair;
  std::vector<CanonicalPair> proxy;  // sorted, contains `pair`
  Path witness;                      // the final P-hat
  std::vector<std::int64_t> level_lengths;  // |P-hat_k| after each level, starting with the detour
  int skipped_levels = 0;
};

/// FindProxyPairs: climb from the pair's region to the root, replacing the
/// stretch of P-hat between its first and last vertex on each ancestor
/// separator by the detours of an exact canonical sequence along it.
class ProxyIndex {
 public:
  explicit ProxyIndex(const DetourIndex& di) : di_(&di) {}

  const DetourIndex& detours() const { return *di_; }

  const ProxyResult& find_proxy_pairs(const CanonicalPair& pair) const {
    return memo_.get({pair.a, pair.b}, [&] { return compute(pair); });
  }

  std::size_t memo_size() const { return memo_.size(); }

 private:
  ProxyResult compute(const CanonicalPair& pair) const {
    const auto& ci = di_->canonical();
    const auto& h = ci.hierarchy();
    ProxyResult out;
    out.pair = pair;
    out.proxy.push_back(pair);
    std::vector<Vertex> path = di_->detour_path(pair).path.vertices;
    out.level_lengths.push_back(walk_base_length(ci.graph(), path));
    for (RegionId r = h.region(h.owner(pair.a)).parent; r != kNoRegion; r = h.region(r).parent) {
      std::size_t si = path.size(), ti = path.size();
      for (std::size_t k = 0; k < path.size(); ++k) {
        if (h.owner(path[k]) == r) {
          if (si == path.size()) si = k;
          ti = k;
        }
      }
      if (si == path.size()) {
        ++out.skipped_levels;
        out.level_lengths.push_back(out.level_lengths.back());
        continue;
      }
      const auto seq = ci.canonical_sequence_on_separator(path[si], path[ti]);
      std::vector<Vertex> next(path.begin(), path.begin() + static_cast<std::ptrdiff_t>(si) + 1);
      for (const auto& step : seq.pairs) {
        const auto& d = di_->detour_path(step).path.vertices;
        if (d.front() == next.back()) {
          next.insert(next.end(), d.begin() + 1, d.end());
        } else {
          next.insert(next.end(), d.rbegin() + 1, d.rend());
        }
        out.proxy.push_back(step);
      }
      next.insert(next.end(), path.begin() + static_cast<std::ptrdiff_t>(ti) + 1, path.end());
      path = std::move(next);
      out.level_lengths.push_back(walk_base_length(ci.graph(), path));
    }
    std::sort(out.proxy.begin(), out.proxy.end());
    out.proxy.erase(std::unique(out.proxy.begin(), out.proxy.end()), out.proxy.end());
    out.witness = make_path(ci.graph(), std::move(path));
    return out;
  }

  const DetourIndex* di_;
  mutable OnceMap<std::pair<Vertex, Vertex>, ProxyResult> memo_;
};

}  // namespace damkit
