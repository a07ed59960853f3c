#include <iostream>

#include "CLI11.hpp"
#include "damkit/cli.hpp"

int main(int argc, char** argv) {
  damkit::RunConfig c;
  CLI::App app{"Distance-approximating minors for planar graphs"};
  app.require_subcommand(1);

  auto add_format = [&](CLI::App* s) { s->add_option("--format", c.format, "input/output format")->capture_default_str(); };
  auto add_build = [&](CLI::App* s) {
    s->add_option("graph", c.graph, "edge list")->required();
    s->add_option("--terminals", c.terminals, "terminal file")->required();
    s->add_option("--epsilon", c.epsilon, "target stretch is 1 + epsilon")->capture_default_str();
    s->add_option("--c-scale", c.c_scale, "constant in the derived epsilon")->capture_default_str();
    s->add_option("--threads", c.threads, "worker threads, 0 = DAMKIT_THREADS or hardware");
    s->add_option("--out", c.out, "output directory")->capture_default_str();
    add_format(s);
  };

  auto* grid = app.add_subcommand("gen-grid", "write a grid graph and random terminals");
  grid->add_option("--width", c.width)->capture_default_str();
  grid->add_option("--height", c.height)->capture_default_str();
  grid->add_option("--weights", c.weights, "unit or random")->capture_default_str();
  grid->add_option("--count", c.count, "number of random terminals")->capture_default_str();
  grid->add_option("--seed", c.seed)->capture_default_str();
  grid->add_option("--out", c.out)->capture_default_str();
  add_format(grid);

  auto* bad = app.add_subcommand("gen-badgrid", "write the crossing-paths grid with 4k terminals");
  bad->add_option("--k", c.k)->capture_default_str();
  bad->add_option("--out", c.out)->capture_default_str();
  add_format(bad);

  auto* dam = app.add_subcommand("build-dam", "exact construction");
  add_build(dam);
  auto* fast = app.add_subcommand("build-dam-fast", "recursive construction over r-divisions");
  add_build(fast);
  fast->add_option("--r", c.r, "piece size, 0 = kappa^4")->capture_default_str();
  fast->add_option("--kappa", c.kappa, "size constant of the round guard")->capture_default_str();
  add_build(app.add_subcommand("build-emulator", "portal emulator (not a minor)"));
  add_build(app.add_subcommand("build-overlay", "exact shortest-path overlay baseline"));

  auto* verify = app.add_subcommand("verify", "check a DAM directory against the graph");
  verify->add_option("graph", c.graph, "edge list")->required();
  verify->add_option("--terminals", c.terminals)->required();
  verify->add_option("--dam", c.dam, "directory written by a build command")->required();
  verify->add_option("--epsilon", c.epsilon, "stretch bound to report")->capture_default_str();
  verify->add_option("--threads", c.threads);
  verify->add_option("--out", c.out, "where stretch.csv and report.txt go")->capture_default_str();
  verify->add_flag("--emulator", c.emulator, "skip minor checks");
  add_format(verify);

  auto* bench = app.add_subcommand("bench", "run every builder on a series of grids");
  bench->add_option("--sizes", c.sizes, "grid side lengths")->delimiter(',');
  bench->add_option("--count", c.count, "terminals per grid")->capture_default_str();
  bench->add_option("--weights", c.weights)->capture_default_str();
  bench->add_option("--seed", c.seed)->capture_default_str();
  bench->add_option("--epsilon", c.epsilon)->capture_default_str();
  bench->add_option("--c-scale", c.c_scale)->capture_default_str();
  bench->add_option("--kappa", c.kappa)->capture_default_str();
  bench->add_option("--r", c.r)->capture_default_str();
  bench->add_option("--threads", c.threads);
  bench->add_option("--out", c.out)->capture_default_str();
  add_format(bench);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : damkit::kExitUsage;
  }
  c.subcommand = app.get_subcommands().front()->get_name();
  return damkit::run(c, std::cout, std::cerr);
}
