// sbm_ppm command line: phase grids, convergence traces, real graphs,
// one-shot projections and SVG plots of the CSV output.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "sbm_ppm/sbm_ppm.hpp"

using namespace sbm_ppm;

namespace {

// "min:max:step" or a single value.
Range parse_range(const std::string& text) {
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(std::stod(item));
  if (parts.size() == 1) return {parts[0], parts[0], 1.0};
  if (parts.size() != 3) throw ParameterError("range must be min:max:step, got '" + text + "'");
  return {parts[0], parts[1], parts[2]};
}

Capacities parse_capacities(const std::string& text) {
  Capacities pi;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) pi.push_back(std::stoll(item));
  if (pi.empty()) throw ParameterError("empty --capacities");
  return pi;
}

// Writes to --out when given, otherwise to stdout.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_ = std::make_unique<std::ofstream>(path);
    if (!*file_) throw InputError("cannot open " + path + " for writing");
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

const std::map<std::string, InitKind> kInit{{"spectral", InitKind::Spectral}, {"random", InitKind::Random}};
const std::map<std::string, Stopping> kStopping{{"budget", Stopping::FixedBudget}, {"cycle", Stopping::CycleDetect}};
const std::map<std::string, GraphFormat> kFormat{{"edgelist", GraphFormat::EdgeList},
                                                 {"mtx", GraphFormat::MatrixMarket}};

struct Common {
  std::uint64_t seed = 1;
  std::optional<int> max_iters;
  std::string stopping = "cycle";
  std::string out;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "base seed");
  cmd->add_option("--max-iters", c.max_iters, "iteration cap (default: theorem budget, at least 30)");
  cmd->add_option("--stopping", c.stopping, "budget | cycle")->check(CLI::IsMember(kStopping));
  cmd->add_option("--out", c.out, "output file (default stdout)");
}

struct GridArgs {
  Common common;
  std::size_t n = 300;
  int k = 3;
  std::string alpha = "0:30:2.5", beta = "0:10:2";
  int trials = 20;
  std::string init = "spectral";
  bool no_self_loops = false, full = false;
};

int cmd_grid(const GridArgs& a) {
  GridSpec spec;
  spec.n = a.n;
  spec.k = a.k;
  spec.alpha = parse_range(a.alpha);
  spec.beta = parse_range(a.beta);
  spec.trials = a.trials;
  if (a.full) {
    const bool large = a.k >= 6;
    spec.alpha = large ? Range{0, 60, 1} : Range{0, 30, 0.5};
    spec.beta = large ? Range{0, 20, 0.8} : Range{0, 10, 0.4};
    spec.trials = 40;
  }
  spec.seed = a.common.seed;
  spec.trial.init = kInit.at(a.init);
  spec.trial.stopping = kStopping.at(a.common.stopping);
  spec.trial.max_iterations = a.common.max_iters;
  spec.trial.self_loops = !a.no_self_loops;
  Output out(a.common.out);
  auto& os = out.stream();
  write_grid_header(os);
  run_phase_grid(spec, [&](const GridCellRecord& r) {
    write_grid_row(os, r);
    os.flush();
  });
  return 0;
}

struct ConvergeArgs {
  Common common;
  std::size_t n = 6000;
  int k = 4;
  double alpha = 18, beta = 4;
  int repeats = 10;
  bool no_self_loops = false;
};

int cmd_converge(const ConvergeArgs& a) {
  ConvergenceOptions opt;
  opt.stopping = kStopping.at(a.common.stopping);
  opt.max_iterations = a.common.max_iters;
  opt.self_loops = !a.no_self_loops;
  const auto runs = run_convergence(a.n, a.k, a.alpha, a.beta, a.repeats, a.common.seed, opt);
  Output out(a.common.out);
  write_convergence_csv(out.stream(), runs);
  return 0;
}

struct RealArgs {
  Common common;
  std::string graph, labels, capacities;
  std::string format;
  std::optional<int> k;
  std::int64_t min_community = 0;
  int repeats = 10;
  bool keep_self_loops = false;
};

int cmd_real(const RealArgs& a) {
  const auto format = !a.format.empty() ? kFormat.at(a.format)
                      : std::filesystem::path(a.graph).extension() == ".mtx" ? GraphFormat::MatrixMarket
                                                                             : GraphFormat::EdgeList;
  LoadOptions lo;
  lo.drop_self_loops = !a.keep_self_loops;
  lo.min_community_size = a.min_community;
  const auto g = load_graph(a.graph, format,
                            a.labels.empty() ? std::nullopt : std::optional<std::string>(a.labels), lo);
  Capacities pi;
  if (!a.capacities.empty())
    pi = parse_capacities(a.capacities);
  else if (g.labels)
    pi = g.capacities();
  else if (a.k)
    pi = balanced_capacities(g.adjacency.n(), *a.k);
  else
    throw ParameterError("real: give --labels, --capacities or --k");
  RealRunOptions opt;
  opt.repeats = a.repeats;
  opt.max_iterations = a.common.max_iters.value_or(1000);
  opt.stopping = kStopping.at(a.common.stopping);
  const auto s = run_real(g, pi, a.common.seed, opt);
  Output out(a.common.out);
  write_real_csv(out.stream(), s);
  return 0;
}

struct ProjectArgs {
  std::string input, capacities, out;
};

// Reads an n x K score matrix (CSV or whitespace separated, '#' comments).
ScoreMatrix read_scores(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open file");
  std::vector<double> values;
  std::size_t k = 0, n = 0, lineno = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[line.find_first_not_of(" \t\r")] == '#')
      continue;
    for (char& ch : line)
      if (ch == ',') ch = ' ';
    std::istringstream ss(line);
    std::size_t count = 0;
    double v = 0.0;
    while (ss >> v) {
      values.push_back(v);
      ++count;
    }
    if (!ss.eof()) throw ParseError(path, lineno, "expected numbers");
    if (k == 0) k = count;
    if (count != k) throw ParseError(path, lineno, "row has " + std::to_string(count) + " entries, expected " + std::to_string(k));
    ++n;
  }
  if (n == 0) throw ParseError(path, lineno, "no rows");
  return ScoreMatrix(n, static_cast<int>(k), std::move(values));
}

int cmd_project(const ProjectArgs& a) {
  const auto c = read_scores(a.input);
  const auto pi = a.capacities.empty() ? balanced_capacities(c.n(), c.k()) : parse_capacities(a.capacities);
  const auto res = project(c, pi);
  Output out(a.out);
  auto& os = out.stream();
  os << std::setprecision(17) << "# objective " << res.objective << "\n# dual";
  for (double w : res.dual.w) os << ' ' << w;
  os << '\n';
  for (std::size_t i = 0; i < res.clustering.n(); ++i) os << res.clustering[i] << '\n';
  return 0;
}

struct PlotArgs {
  std::string input, out;
  int k = 3;
};

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  bool quoted = false;
  for (char ch : line) {
    if (ch == '"') {
      quoted = !quoted;
    } else if (ch == ',' && !quoted) {
      cells.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  cells.push_back(cur);
  return cells;
}

int cmd_plot(const PlotArgs& a) {
  std::ifstream in(a.input);
  if (!in) throw ParseError(a.input, 0, "cannot open file");
  std::string header;
  std::getline(in, header);
  const auto cols = split_csv(header);
  Output out(a.out);
  std::string line;
  if (cols.size() >= 5 && cols[0] == "alpha" && cols[1] == "beta") {
    std::vector<GridPoint> pts;
    while (std::getline(in, line)) {
      const auto f = split_csv(line);
      if (f.size() < 5) continue;
      pts.push_back({std::stod(f[0]), std::stod(f[1]), f[4].empty() ? 0.0 : std::stod(f[4])});
    }
    plot_grid_svg(out.stream(), pts, a.k);
  } else if (cols.size() == 3 && cols[0] == "run_id") {
    std::vector<TracePoint> pts;
    while (std::getline(in, line)) {
      const auto f = split_csv(line);
      if (f.size() != 3) continue;
      pts.push_back({std::stoi(f[0]), std::stoi(f[1]), std::stod(f[2])});
    }
    plot_convergence_svg(out.stream(), pts);
  } else {
    throw ParseError(a.input, 1, "unrecognised CSV header (expected a grid or convergence file)");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Projected power method for stochastic block models"};
  app.require_subcommand(1);

  GridArgs grid;
  auto* g = app.add_subcommand("grid", "phase-transition grid of exact-recovery rates");
  g->add_option("--n", grid.n, "vertices");
  g->add_option("--k", grid.k, "communities");
  g->add_option("--alpha-range", grid.alpha, "min:max:step");
  g->add_option("--beta-range", grid.beta, "min:max:step");
  g->add_option("--trials", grid.trials, "trials per cell");
  g->add_option("--init", grid.init, "spectral | random")->check(CLI::IsMember(kInit));
  g->add_flag("--no-self-loops", grid.no_self_loops, "sample graphs without self-loops");
  g->add_flag("--full", grid.full, "fine grid with 40 trials per cell (overrides ranges and trials)");
  add_common(g, grid.common);

  ConvergeArgs conv;
  auto* c = app.add_subcommand("converge", "distance-to-truth traces from random starts");
  c->add_option("--n", conv.n, "vertices");
  c->add_option("--k", conv.k, "communities");
  c->add_option("--alpha", conv.alpha, "within-community rate");
  c->add_option("--beta", conv.beta, "between-community rate");
  c->add_option("--repeats", conv.repeats, "random starts");
  c->add_flag("--no-self-loops", conv.no_self_loops, "sample graphs without self-loops");
  add_common(c, conv.common);

  RealArgs real;
  auto* r = app.add_subcommand("real", "best-of-repeats run on a graph file");
  r->add_option("graph", real.graph, "edge list or MatrixMarket file")->required()->check(CLI::ExistingFile);
  r->add_option("--labels", real.labels, "ground-truth labels, one per line")->check(CLI::ExistingFile);
  r->add_option("--format", real.format, "edgelist | mtx (default: by extension)")
      ->check(CLI::IsMember(kFormat));
  r->add_option("--capacities", real.capacities, "community sizes, comma separated");
  r->add_option("--k", real.k, "balanced communities when no labels are given");
  r->add_option("--min-community-size", real.min_community, "drop labelled communities smaller than this");
  r->add_option("--repeats", real.repeats, "random starts");
  r->add_flag("--keep-self-loops", real.keep_self_loops, "keep self-loops from the file");
  add_common(r, real.common);

  ProjectArgs proj;
  auto* p = app.add_subcommand("project", "project one score matrix onto the capacity constraints");
  p->add_option("scores", proj.input, "n x K matrix, CSV or whitespace separated")->required()->check(CLI::ExistingFile);
  p->add_option("--capacities", proj.capacities, "group sizes, comma separated (default balanced)");
  p->add_option("--out", proj.out, "output file (default stdout)");

  PlotArgs plot;
  auto* pl = app.add_subcommand("plot", "SVG from a grid or convergence CSV");
  pl->add_option("csv", plot.input, "grid or convergence CSV")->required()->check(CLI::ExistingFile);
  pl->add_option("--k", plot.k, "communities, for the threshold curve");
  pl->add_option("--out", plot.out, "output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*g) return cmd_grid(grid);
    if (*c) return cmd_converge(conv);
    if (*r) return cmd_real(real);
    if (*p) return cmd_project(proj);
    if (*pl) return cmd_plot(plot);
  } catch (const std::exception& e) {
    std::cerr << "sbm_ppm: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
