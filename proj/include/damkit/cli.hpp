#pragma once

#include <filesystem>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "damkit/generators.hpp"
#include "damkit/io.hpp"
#include "damkit/verify.hpp"

namespace damkit {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

struct RunConfig {
  std::string subcommand;
  std::string graph;      // input edge list
  std::string terminals;  // terminals file
  std::string dam;        // DAM directory for `verify`
  std::string out = ".";
  std::string format = "edgelist";
  double epsilon = 0.5;
  double c_scale = kDefaultCScale;
  int r = 0;
  int kappa = kDefaultKappa;
  std::uint64_t seed = 1;
  int threads = 0;
  // generators
  int width = 8, height = 8;
  std::string weights = "unit";
  int k = 4;
  int count = 4;  // random terminals for gen-grid and bench
  // bench
  std::vector<int> sizes{8, 12, 16};
  bool emulator = false;  // verify: the sketch is an emulator, skip minor checks
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void write_file(const std::filesystem::path& p, const std::string& text) { open_out(p) << text; }

inline std::string stats_text(const Dam& d, const std::string& builder) {
  std::ostringstream os;
  const auto& s = d.stats;
  os << std::setprecision(17);
  os << "builder " << builder << "\n";
  os << "terminals " << d.terminals.size() << "\n";
  os << "epsilon0 " << s.epsilon0 << "\nepsilon " << s.epsilon << "\nc_scale " << s.c_scale << "\n";
  os << "height " << s.height << "\ndistance_bound " << s.distance_bound << "\n";
  os << "rel_pairs " << s.rel_pairs << "\nproxy_pairs " << s.proxy_pairs << "\nnon_canonical_pairs " << s.non_canonical_pairs
     << "\n";
  os << "safe_paths " << s.safe_paths << "\nendpoints " << s.endpoints << "\nsplitting_points " << s.splitting_points << "\n";
  os << "overlay_edges " << d.overlay.size() << "\nminor_vertices " << d.minor.vertex_count() << "\nminor_edges "
     << d.minor.edge_count() << "\n";
  if (!s.round_vertices.empty()) {
    os << "round_vertices";
    for (auto v : s.round_vertices) os << ' ' << v;
    os << "\n";
  }
  return os.str();
}

inline void require_epsilon(double eps) {
  if (!(eps > 0 && eps < 1)) throw UsageError("--epsilon must lie in (0,1)");
}

inline void require(bool ok, const std::string& what) {
  if (!ok) throw UsageError(what);
}

inline Dam run_builder(const std::string& builder, const Graph& g, const std::vector<Vertex>& t, const RunConfig& c) {
  if (builder == "build-dam") return build_dam(g, t, {c.epsilon, c.c_scale, c.threads});
  if (builder == "build-dam-fast") {
    FastOptions o;
    o.epsilon0 = c.epsilon;
    o.c_scale = c.c_scale;
    o.kappa = c.kappa;
    o.r = c.r;
    o.threads = c.threads;
    return build_dam_fast(g, t, o);
  }
  if (builder == "build-emulator") return build_emulator(g, t, c.epsilon);
  return build_overlay_baseline(g, t, c.epsilon);
}

inline int cmd_gen_grid(const RunConfig& c, std::ostream& out) {
  require(c.width >= 1 && c.height >= 1, "--width and --height must be positive");
  require(c.weights == "unit" || c.weights == "random", "--weights must be unit or random");
  const Graph g = generate_grid(c.width, c.height, c.weights == "unit" ? WeightMode::unit : WeightMode::random, c.seed);
  require(c.count >= 0 && c.count <= g.vertex_count(), "--count out of range");
  std::filesystem::create_directories(c.out);
  std::ostringstream gs, ts;
  write_edge_list(gs, g);
  write_terminals(ts, random_terminals(g, static_cast<std::size_t>(c.count), c.seed));
  write_file(std::filesystem::path(c.out) / "graph.txt", gs.str());
  write_file(std::filesystem::path(c.out) / "terminals.txt", ts.str());
  out << "wrote " << g.vertex_count() << " vertices, " << g.edge_count() << " edges, " << c.count << " terminals to " << c.out
      << "\n";
  return kExitOk;
}

inline int cmd_gen_badgrid(const RunConfig& c, std::ostream& out) {
  require(c.k >= 2, "--k must be at least 2");
  const Instance inst = generate_badgrid(c.k);
  std::filesystem::create_directories(c.out);
  std::ostringstream gs, ts;
  write_edge_list(gs, inst.graph);
  write_terminals(ts, inst.terminals);
  write_file(std::filesystem::path(c.out) / "graph.txt", gs.str());
  write_file(std::filesystem::path(c.out) / "terminals.txt", ts.str());
  out << "wrote badgrid k=" << c.k << " with " << inst.graph.vertex_count() << " vertices and " << inst.terminals.size()
      << " terminals to " << c.out << "\n";
  return kExitOk;
}

inline int cmd_build(const RunConfig& c, std::ostream& out) {
  require_epsilon(c.epsilon);
  require(!c.graph.empty(), "missing input graph");
  require(!c.terminals.empty(), "missing --terminals");
  require(c.kappa >= 1, "--kappa must be positive");
  require(c.r == 0 || c.r >= 2, "--r must be at least 2");
  require(c.c_scale > 0, "--c-scale must be positive");
  const Graph g = load_graph(c.graph);
  const auto t = load_terminals(c.terminals, g.vertex_count());
  if (t.empty()) throw InputError(c.terminals + ": no terminals");
  const Dam d = run_builder(c.subcommand, g, t, c);
  save_dam(c.out, d.minor, g.unit());
  write_file(std::filesystem::path(c.out) / "stats.txt", stats_text(d, c.subcommand));
  out << c.subcommand << ": " << d.minor.vertex_count() << " vertices, " << d.minor.edge_count() << " edges in "
      << d.stats.seconds << " s -> " << c.out << "\n";
  return kExitOk;
}

inline int cmd_verify(const RunConfig& c, std::ostream& out) {
  require_epsilon(c.epsilon);
  require(!c.graph.empty(), "missing input graph");
  require(!c.terminals.empty(), "missing --terminals");
  require(!c.dam.empty(), "missing --dam");
  const Graph g = load_graph(c.graph);
  auto t = load_terminals(c.terminals, g.vertex_count());
  std::sort(t.begin(), t.end());
  Dam d;
  d.terminals = t;
  d.minor = load_dam(c.dam, g.unit());
  bool failed = false;
  std::ostringstream report;
  if (!c.emulator) {
    for (const ChainEdge& e : d.minor.edges)
      for (std::size_t k = 1; k < e.chain.size(); ++k)
        if (g.valid_vertex(e.chain[k - 1]) && g.valid_vertex(e.chain[k]))
          if (auto id = g.find_edge(e.chain[k - 1], e.chain[k])) d.overlay.push_back(*id);
    std::sort(d.overlay.begin(), d.overlay.end());
    d.overlay.erase(std::unique(d.overlay.begin(), d.overlay.end()), d.overlay.end());
    const MinorReport m = verify_minor(d, g);
    report << "minor " << (m.ok() ? "valid" : "INVALID") << "\n";
    for (const auto& p : m.problems) report << "  " << p << "\n";
    failed = !m.ok();
  }
  StretchReport r;
  try {
    r = measure_stretch(sketch_distances(d.minor, t), brute_force_distances(g, t, resolve_threads(c.threads)));
  } catch (const PreconditionError& e) {
    report << "stretch not measurable: " << e.what() << "\n";
    out << report.str() << "FAIL\n";
    return kExitFailure;
  }
  r.vertices = d.minor.vertex_count();
  r.edges = d.minor.edge_count();
  write_stretch_summary(report, r, 1 + c.epsilon);
  failed = failed || r.hard_failure();
  std::filesystem::create_directories(c.out);
  std::ostringstream csv;
  write_stretch_csv(csv, r, g.unit());
  write_file(std::filesystem::path(c.out) / "stretch.csv", csv.str());
  write_file(std::filesystem::path(c.out) / "report.txt", report.str());
  out << report.str();
  return failed ? kExitFailure : kExitOk;
}

inline int cmd_bench(const RunConfig& c, std::ostream& out) {
  require_epsilon(c.epsilon);
  require(!c.sizes.empty(), "--sizes is empty");
  require(c.c_scale > 0, "--c-scale must be positive");
  std::vector<BenchRow> rows;
  for (int n : c.sizes) {
    require(n >= 2, "grid sizes must be at least 2");
    const Graph g = generate_grid(n, n, c.weights == "random" ? WeightMode::random : WeightMode::unit, c.seed);
    const auto t = random_terminals(g, static_cast<std::size_t>(std::min<int>(c.count, g.vertex_count())), c.seed);
    const auto oracle = brute_force_distances(g, t);
    const std::string instance = "grid" + std::to_string(n) + "x" + std::to_string(n);
    for (const char* builder : {"build-dam", "build-dam-fast", "build-emulator", "build-overlay"}) {
      const Dam d = run_builder(builder, g, t, c);
      const auto r = measure_stretch(sketch_distances(d.minor, d.terminals), oracle);
      rows.push_back({instance, std::string(builder).substr(6), g.vertex_count(), g.edge_count(), t.size(), c.epsilon,
                      d.stats.epsilon, d.minor.vertex_count(), d.minor.edge_count(), d.overlay.size(), r.max_ratio,
                      d.stats.seconds});
      out << instance << ' ' << rows.back().builder << " vertices " << d.minor.vertex_count() << " stretch " << r.max_ratio
          << "\n";
    }
  }
  std::filesystem::create_directories(c.out);
  std::ostringstream csv;
  write_bench_csv(csv, rows);
  write_file(std::filesystem::path(c.out) / "bench.csv", csv.str());
  return kExitOk;
}

}  // namespace detail

/// Runs one subcommand. Usage errors exit 2, failed verification or I/O
/// errors exit 1.
inline int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    if (c.format != "edgelist") throw UsageError("--format must be edgelist");
    if (c.subcommand == "gen-grid") return detail::cmd_gen_grid(c, out);
    if (c.subcommand == "gen-badgrid") return detail::cmd_gen_badgrid(c, out);
    if (c.subcommand == "build-dam" || c.subcommand == "build-dam-fast" || c.subcommand == "build-emulator" ||
        c.subcommand == "build-overlay") {
      return detail::cmd_build(c, out);
    }
    if (c.subcommand == "verify") return detail::cmd_verify(c, out);
    if (c.subcommand == "bench") return detail::cmd_bench(c, out);
    throw UsageError("unknown subcommand '" + c.subcommand + "'");
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

}  // namespace damkit
