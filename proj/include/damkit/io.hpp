#pragma once

// Text formats.
//
// Edge list: optional '#' comment lines and blank lines anywhere; the first
// data line is `n m`, followed by exactly m lines `u v w` with 0 <= u, v < n
// and w a positive decimal (digits with at most one '.', up to 12 places).
// Self-loops and duplicate edges are rejected.
//
// Terminals: one vertex id per line (comments and blanks allowed), distinct.
//
// DAM directory: minor.txt is an edge list over minor ids 0..k-1;
// vertex_map.txt holds lines `minor_id original_id`; certificate.txt holds
// lines `minor_u minor_v : x0 x1 ... xl`, the original vertices of the
// contracted chain from u to v, in the edge order of minor.txt. Emulators
// have no certificates and leave certificate.txt empty.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "damkit/dam.hpp"

namespace damkit {

namespace detail {

/// Line reader that skips comments and blanks and remembers line numbers.
class LineReader {
 public:
  LineReader(std::istream& is, std::string source) : is_(&is), source_(std::move(source)) {}

  bool next(std::string& line) {
    while (std::getline(*is_, line)) {
      ++number_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      const auto first = line.find_first_not_of(" \t");
      if (first == std::string::npos || line[first] == '#') continue;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw InputError(source_ + ":" + std::to_string(number_) + ": " + what);
  }

  const std::string& source() const { return source_; }

 private:
  std::istream* is_;
  std::string source_;
  int number_ = 0;
};

inline std::vector<std::string> split_words(const std::string& line) {
  std::istringstream ls(line);
  std::vector<std::string> out;
  for (std::string w; ls >> w;) out.push_back(std::move(w));
  return out;
}

inline std::int64_t parse_int(const LineReader& r, const std::string& word, const char* what) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(word, &used);
  } catch (const std::exception&) {
    r.fail(std::string("bad ") + what + " '" + word + "'");
  }
  if (used != word.size()) r.fail(std::string("bad ") + what + " '" + word + "'");
  return v;
}

inline std::ifstream open_in(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw InputError(p.string() + ": cannot open");
  return in;
}

inline std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p);
  if (!out) throw InputError(p.string() + ": cannot write");
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Graphs and terminals

inline Graph read_edge_list(std::istream& is, const std::string& source = "<input>") {
  detail::LineReader r(is, source);
  std::string line;
  if (!r.next(line)) r.fail("missing header 'n m'");
  auto head = detail::split_words(line);
  if (head.size() != 2) r.fail("header must be 'n m'");
  const auto n = detail::parse_int(r, head[0], "vertex count");
  const auto m = detail::parse_int(r, head[1], "edge count");
  if (n < 0 || n > kMaxGeneratedVertices) r.fail("vertex count out of range");
  if (m < 0) r.fail("negative edge count");
  std::vector<std::tuple<Vertex, Vertex, std::string>> edges;
  std::set<std::pair<Vertex, Vertex>> seen;
  for (std::int64_t i = 0; i < m; ++i) {
    if (!r.next(line)) r.fail("expected " + std::to_string(m) + " edges, found " + std::to_string(i));
    auto w = detail::split_words(line);
    if (w.size() != 3) r.fail("edge line must be 'u v w'");
    const auto u = detail::parse_int(r, w[0], "vertex"), v = detail::parse_int(r, w[1], "vertex");
    if (u < 0 || u >= n || v < 0 || v >= n) r.fail("vertex out of range");
    if (u == v) r.fail("self-loop at " + w[0]);
    if (!seen.emplace(std::min(u, v), std::max(u, v)).second) r.fail("duplicate edge " + w[0] + " " + w[1]);
    Decimal d;
    try {
      d = Decimal::parse(w[2]);
    } catch (const InputError& e) {
      r.fail(e.what());
    }
    if (d.mantissa == 0) r.fail("weight must be positive");
    edges.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v), w[2]);
  }
  if (r.next(line)) r.fail("trailing data after " + std::to_string(m) + " edges");
  return Graph::from_decimal_edges(static_cast<Vertex>(n), edges);
}

inline void write_edge_list(std::ostream& os, const Graph& g) {
  os << g.vertex_count() << ' ' << g.edge_count() << '\n';
  for (const Edge& e : g.edges()) os << e.u << ' ' << e.v << ' ' << g.unit().format(e.weight) << '\n';
}

inline std::vector<Vertex> read_terminals(std::istream& is, Vertex n, const std::string& source = "<terminals>") {
  detail::LineReader r(is, source);
  std::vector<Vertex> out;
  std::set<Vertex> seen;
  for (std::string line; r.next(line);) {
    auto w = detail::split_words(line);
    if (w.size() != 1) r.fail("expected one vertex id per line");
    const auto v = detail::parse_int(r, w[0], "vertex");
    if (v < 0 || v >= n) r.fail("terminal " + w[0] + " out of range");
    if (!seen.insert(static_cast<Vertex>(v)).second) r.fail("duplicate terminal " + w[0]);
    out.push_back(static_cast<Vertex>(v));
  }
  return out;
}

inline void write_terminals(std::ostream& os, const std::vector<Vertex>& terminals) {
  for (Vertex t : terminals) os << t << '\n';
}

inline Graph load_graph(const std::filesystem::path& p) {
  auto in = detail::open_in(p);
  return read_edge_list(in, p.string());
}

inline std::vector<Vertex> load_terminals(const std::filesystem::path& p, Vertex n) {
  auto in = detail::open_in(p);
  return read_terminals(in, n, p.string());
}

// ---------------------------------------------------------------------------
// DAM files

struct DamFiles {
  std::string minor, vertex_map, certificate;
};

/// Serializes a sketch with weights rendered in `unit`. Edges without a chain
/// (emulator edges) get no certificate line.
inline DamFiles format_dam(const ChainGraph& minor, const WeightUnit& unit) {
  std::map<Vertex, Vertex> id;
  for (Vertex v : minor.vertices) id.emplace(v, static_cast<Vertex>(id.size()));
  std::ostringstream m, vm, cert;
  m << minor.vertices.size() << ' ' << minor.edges.size() << '\n';
  for (const ChainEdge& e : minor.edges) {
    m << id.at(e.u) << ' ' << id.at(e.v) << ' ' << unit.format(e.weight) << '\n';
    if (e.chain.empty()) continue;
    cert << id.at(e.u) << ' ' << id.at(e.v) << " :";
    for (Vertex x : e.chain) cert << ' ' << x;
    cert << '\n';
  }
  for (const auto& [orig, mid] : id) vm << mid << ' ' << orig << '\n';
  return {m.str(), vm.str(), cert.str()};
}

/// Parses the three DAM files back into a chain graph over original ids; the
/// weights are rescaled into `unit`, which must represent them exactly.
inline ChainGraph parse_dam(const DamFiles& files, const WeightUnit& unit) {
  std::istringstream min(files.minor), map(files.vertex_map), cert(files.certificate);
  std::vector<Vertex> orig;
  {
    detail::LineReader r(map, "vertex_map.txt");
    for (std::string line; r.next(line);) {
      auto w = detail::split_words(line);
      if (w.size() != 2) r.fail("expected 'minor_id original_id'");
      const auto mid = detail::parse_int(r, w[0], "minor id");
      const auto o = detail::parse_int(r, w[1], "vertex");
      if (mid != static_cast<std::int64_t>(orig.size())) r.fail("minor ids must be 0..k-1 in order");
      if (o < 0) r.fail("negative vertex id");
      orig.push_back(static_cast<Vertex>(o));
    }
  }
  ChainGraph out;
  out.vertices = orig;
  if (!std::is_sorted(out.vertices.begin(), out.vertices.end())) throw InputError("vertex_map.txt: original ids must increase");
  detail::LineReader r(min, "minor.txt");
  std::string line;
  if (!r.next(line)) r.fail("missing header 'n m'");
  auto head = detail::split_words(line);
  if (head.size() != 2) r.fail("header must be 'n m'");
  if (detail::parse_int(r, head[0], "vertex count") != static_cast<std::int64_t>(orig.size())) {
    r.fail("vertex count disagrees with vertex_map.txt");
  }
  const auto m = detail::parse_int(r, head[1], "edge count");
  for (std::int64_t i = 0; i < m; ++i) {
    if (!r.next(line)) r.fail("missing edges");
    auto w = detail::split_words(line);
    if (w.size() != 3) r.fail("edge line must be 'u v w'");
    const auto u = detail::parse_int(r, w[0], "minor id"), v = detail::parse_int(r, w[1], "minor id");
    if (u < 0 || v < 0 || u >= static_cast<std::int64_t>(orig.size()) || v >= static_cast<std::int64_t>(orig.size())) {
      r.fail("minor id out of range");
    }
    Decimal d;
    try {
      d = Decimal::parse(w[2]);
    } catch (const InputError& e) {
      r.fail(e.what());
    }
    if (d.decimals > unit.decimals) r.fail("weight finer than the graph's unit");
    const __int128 raw = static_cast<__int128>(d.mantissa) * pow10_i64(unit.decimals - d.decimals);
    if (raw % unit.numerator != 0) r.fail("weight is not a multiple of the graph's unit");
    ChainEdge e{orig[static_cast<std::size_t>(u)], orig[static_cast<std::size_t>(v)], static_cast<std::int64_t>(raw / unit.numerator), {}};
    if (e.u > e.v) std::swap(e.u, e.v);
    out.edges.push_back(std::move(e));
  }
  detail::LineReader c(cert, "certificate.txt");
  std::size_t at = 0;
  for (; c.next(line); ++at) {
    auto w = detail::split_words(line);
    if (w.size() < 5 || w[2] != ":") c.fail("expected 'u v : x0 ... xl'");
    if (at >= out.edges.size()) c.fail("more certificate lines than minor edges");
    const auto u = detail::parse_int(c, w[0], "minor id"), v = detail::parse_int(c, w[1], "minor id");
    if (u < 0 || v < 0 || u >= static_cast<std::int64_t>(orig.size()) || v >= static_cast<std::int64_t>(orig.size())) {
      c.fail("minor id out of range");
    }
    ChainEdge& e = out.edges[at];
    if (std::minmax(orig[static_cast<std::size_t>(u)], orig[static_cast<std::size_t>(v)]) != std::minmax(e.u, e.v)) {
      c.fail("certificate endpoints disagree with minor.txt");
    }
    for (std::size_t k = 3; k < w.size(); ++k) e.chain.push_back(static_cast<Vertex>(detail::parse_int(c, w[k], "vertex")));
    if (e.chain.front() != e.u) std::reverse(e.chain.begin(), e.chain.end());
  }
  if (at != 0 && at != out.edges.size()) c.fail("certificate covers " + std::to_string(at) + " of " + std::to_string(out.edges.size()) + " edges");
  return out;
}

inline void save_dam(const std::filesystem::path& dir, const ChainGraph& minor, const WeightUnit& unit) {
  std::filesystem::create_directories(dir);
  const DamFiles f = format_dam(minor, unit);
  detail::open_out(dir / "minor.txt") << f.minor;
  detail::open_out(dir / "vertex_map.txt") << f.vertex_map;
  detail::open_out(dir / "certificate.txt") << f.certificate;
}

inline ChainGraph load_dam(const std::filesystem::path& dir, const WeightUnit& unit) {
  auto slurp = [&](const char* name) {
    auto in = detail::open_in(dir / name);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  return parse_dam({slurp("minor.txt"), slurp("vertex_map.txt"), slurp("certificate.txt")}, unit);
}

// ---------------------------------------------------------------------------
// Benchmark CSV

inline constexpr const char* kBenchHeader = "# damkit-bench v1";

struct BenchRow {
  std::string instance;
  std::string builder;
  std::int64_t vertices = 0;
  std::int64_t edges = 0;
  std::size_t terminals = 0;
  double epsilon0 = 0;
  double epsilon = 0;
  std::size_t minor_vertices = 0;
  std::size_t minor_edges = 0;
  std::size_t overlay_edges = 0;
  double max_stretch = 0;
  double seconds = 0;

  friend bool operator==(const BenchRow&, const BenchRow&) = default;
};

inline constexpr const char* kBenchColumns =
    "instance,builder,vertices,edges,terminals,epsilon0,epsilon,minor_vertices,minor_edges,overlay_edges,max_stretch,seconds";

inline void write_bench_csv(std::ostream& os, const std::vector<BenchRow>& rows) {
  os << kBenchHeader << '\n' << kBenchColumns << '\n';
  for (const auto& r : rows) {
    os << r.instance << ',' << r.builder << ',' << r.vertices << ',' << r.edges << ',' << r.terminals << ','
       << std::setprecision(17) << r.epsilon0 << ',' << r.epsilon << ',' << r.minor_vertices << ',' << r.minor_edges
       << ',' << r.overlay_edges << ',' << r.max_stretch << ',' << r.seconds << '\n';
  }
}

inline std::vector<BenchRow> read_bench_csv(std::istream& is, const std::string& source = "<bench>") {
  std::string line;
  int number = 0;
  auto fail = [&](const std::string& what) -> void { throw InputError(source + ":" + std::to_string(number) + ": " + what); };
  if (!std::getline(is, line) || (++number, line != kBenchHeader)) fail("missing '" + std::string(kBenchHeader) + "'");
  if (!std::getline(is, line) || (++number, line != kBenchColumns)) fail("unexpected column header");
  std::vector<BenchRow> rows;
  while (std::getline(is, line)) {
    ++number;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::istringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) f.push_back(cell);
    if (f.size() != 12) fail("expected 12 fields");
    try {
      rows.push_back({f[0], f[1], std::stoll(f[2]), std::stoll(f[3]), std::stoul(f[4]), std::stod(f[5]), std::stod(f[6]),
                      std::stoul(f[7]), std::stoul(f[8]), std::stoul(f[9]), std::stod(f[10]), std::stod(f[11])});
    } catch (const std::exception&) {
      fail("bad number");
    }
  }
  return rows;
}

}  // namespace damkit
