// pdasreg: generate data, solve isotonic regression and trend filtering
// problems, and run success-rate grids.
//
// Exit codes: 0 optimal, 2 iteration limit, 3 cycled, 1 usage or I/O error.
#include <algorithm>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pdas/bench.hpp"
#include "pdas/generate.hpp"
#include "pdas/io.hpp"
#include "pdas/isotonic.hpp"
#include "pdas/trend_filter.hpp"

using namespace pdas;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_error = 1;
constexpr int exit_limit = 2;
constexpr int exit_cycled = 3;

int status_exit(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return exit_ok;
    case SolveStatus::IterationLimit: return exit_limit;
    case SolveStatus::Cycled: return exit_cycled;
  }
  return exit_error;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    io::write_text(path, text);
  }
}

std::string vector_text(const Vector& v) {
  std::string out;
  for (double x : v) out += io::format_double(x) + "\n";
  return out;
}

struct GenArgs {
  std::string kind = "linear";
  std::size_t n = 0;
  std::uint64_t seed = 0;
  std::string base;
  std::string output = "-";
};

struct IrArgs {
  std::string data;
  std::string solver = "pdas";
  std::string warm_start;
  std::string report;
  std::string output;
  std::string save_partition;
  std::uint64_t seed = 0;
  bool no_timing = false;
};

struct TfArgs {
  std::string data;
  std::string penalty = "l1";
  int order = 1;
  double lambda = 10.0;
  std::string variant = "sf2";
  int tmax = 5;
  std::size_t m = 5;
  double ds = 0.9;
  double de = 1.1;
  std::size_t max_iter = default_max_iter;
  std::string warm_start;
  std::string report;
  std::string output;
  std::string save_partition;
  std::uint64_t seed = 0;
  bool no_timing = false;
};

struct GridArgs {
  std::vector<std::size_t> sizes{10'000};
  bool full = false;
  std::size_t repeats = 10;
  std::vector<std::string> variants{"plain", "sf1", "sf2"};
  std::vector<std::string> penalties{"l1pos", "l1"};
  std::vector<int> orders{1, 2};
  double lambda = 10.0;
  std::size_t max_iter = default_max_iter;
  int tmax = 5;
  std::size_t m = 5;
  double ds = 0.9;
  double de = 1.1;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  std::string output = "-";
  bool no_timing = false;
  bool quiet = false;
};

int run_gen(const GenArgs& a) {
  Vector base;
  if (!a.base.empty()) base = io::read_data_csv(a.base).y;
  const Vector y = generate({parse_gen_kind(a.kind), a.n, a.seed}, base);
  emit(a.output, vector_text(y));
  return exit_ok;
}

int run_ir(const IrArgs& a) {
  const io::DataColumns cols = io::read_data_csv(a.data);
  const IRProblem problem = cols.weights.empty() ? IRProblem(cols.y) : IRProblem(cols.y, cols.weights);
  IrSolution sol = [&] {
    if (a.solver == "pav") {
      if (!a.warm_start.empty()) throw ValidationError("pav always starts from singletons; --warm-start needs pdas");
      return pav_solve(problem);
    }
    if (a.solver != "pdas") throw ValidationError("unknown solver '" + a.solver + "' (expected pav or pdas)");
    std::optional<BlockPartition> init;
    if (!a.warm_start.empty()) init.emplace(problem, io::read_block_layout(a.warm_start));
    return pdas_ir_solve(problem, init);
  }();
  if (a.no_timing) sol.report.wall_time = 0.0;
  emit(a.report, io::format_report(sol.report));
  if (!a.output.empty()) io::write_vector_csv(a.output, sol.theta);
  if (!a.save_partition.empty()) io::write_block_layout(a.save_partition, sol.partition.layout());
  return status_exit(sol.report.status);
}

int run_tf(const TfArgs& a) {
  const io::DataColumns cols = io::read_data_csv(a.data);
  if (!cols.weights.empty()) throw ValidationError("trend filtering uses unit weights; the data file has two columns");
  const TFProblem problem(cols.y, a.lambda, a.order, parse_penalty(a.penalty));
  TfSolverConfig cfg;
  cfg.variant = parse_variant(a.variant);
  cfg.sf1.t_max = a.tmax;
  cfg.sf2.m = a.m;
  cfg.sf2.delta_s = a.ds;
  cfg.sf2.delta_e = a.de;
  cfg.max_iter = a.max_iter;
  std::optional<SignPartition> init;
  if (!a.warm_start.empty()) {
    init = io::read_sign_partition(a.warm_start);
    if (init->size() != problem.rows()) {
      throw ValidationError("warm-start partition has m = " + std::to_string(init->size()) + " but n - d = " +
                            std::to_string(problem.rows()));
    }
  }
  TfSolution sol = tf_solve(problem, cfg, init);
  if (a.no_timing) sol.report.wall_time = 0.0;
  emit(a.report, io::format_report(sol.report));
  if (!a.output.empty()) io::write_vector_csv(a.output, sol.point.theta);
  if (!a.save_partition.empty()) io::write_sign_partition(a.save_partition, sol.partition);
  return status_exit(sol.report.status);
}

int run_grid_cmd(const GridArgs& a) {
  ExperimentGrid g;
  g.sizes = a.sizes;
  if (a.full) {
    for (std::size_t n : {std::size_t{170'000}, std::size_t{330'000}}) {
      if (std::find(g.sizes.begin(), g.sizes.end(), n) == g.sizes.end()) g.sizes.push_back(n);
    }
  }
  g.repeats = a.repeats;
  g.variants.clear();
  for (const auto& v : a.variants) g.variants.push_back(parse_variant(v));
  g.penalties.clear();
  for (const auto& p : a.penalties) g.penalties.push_back(parse_penalty(p));
  g.orders = a.orders;
  g.lambda = a.lambda;
  g.max_iter = a.max_iter;
  g.sf1.t_max = a.tmax;
  g.sf2.m = a.m;
  g.sf2.delta_s = a.ds;
  g.sf2.delta_e = a.de;
  g.seed = a.seed;
  g.jobs = a.jobs;
  auto rows = run_grid(g, [&](const GridRow& r) {
    if (a.quiet) return;
    std::fprintf(stderr, "n=%zu d=%d %s %s success=%s\n", r.n, r.order, to_string(r.penalty).c_str(),
                 to_string(r.variant).c_str(), io::format_double(r.success).c_str());
  });
  if (a.no_timing) {
    for (auto& r : rows) r.med_time_s = 0.0;
  }
  emit(a.output, format_grid_csv(rows));
  return exit_ok;
}

void add_sf_options(CLI::App* cmd, int& tmax, std::size_t& m, double& ds, double& de) {
  cmd->add_option("--tmax", tmax, "SF1 non-improvement budget")->capture_default_str();
  cmd->add_option("--m", m, "SF2 queue length")->capture_default_str();
  cmd->add_option("--ds", ds, "SF2 shrink factor in (0,1)")->capture_default_str();
  cmd->add_option("--de", de, "SF2 growth factor > 1")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Primal-dual active-set solvers for isotonic regression and trend filtering"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Write a generated data vector as CSV");
  g->add_option("--kind", gen.kind, "linear, uniform or perturb")
      ->check(CLI::IsMember({"linear", "uniform", "perturb"}))
      ->capture_default_str();
  g->add_option("-n,--n", gen.n, "Number of points")->required();
  g->add_option("--seed", gen.seed, "Random seed")->capture_default_str();
  g->add_option("--base", gen.base, "CSV perturbed by --kind perturb (zeros when omitted)");
  g->add_option("-o,--output", gen.output, "Output path, - for stdout")->capture_default_str();

  IrArgs ir;
  auto* i = app.add_subcommand("ir", "Solve an isotonic regression problem");
  i->add_option("data", ir.data, "CSV with y or y,w per line")->required();
  i->add_option("--solver", ir.solver, "pav or pdas")->check(CLI::IsMember({"pav", "pdas"}))->capture_default_str();
  i->add_option("--warm-start", ir.warm_start, "Block partition JSON to start pdas from");
  i->add_option("--report", ir.report, "Report JSON path (stdout when omitted)");
  i->add_option("--output", ir.output, "Write the fitted values as CSV");
  i->add_option("--save-partition", ir.save_partition, "Write the final block partition JSON");
  i->add_option("--seed", ir.seed, "Accepted for uniformity; the solvers are deterministic");
  i->add_flag("--no-timing", ir.no_timing, "Zero the wall_time field so reports are byte-identical");

  TfArgs tf;
  auto* t = app.add_subcommand("tf", "Solve a trend filtering problem");
  t->add_option("data", tf.data, "CSV with one y per line")->required();
  t->add_option("--penalty", tf.penalty, "l1 or l1pos")->check(CLI::IsMember({"l1", "l1pos"}))->capture_default_str();
  t->add_option("--order", tf.order, "Difference order")->check(CLI::PositiveNumber)->capture_default_str();
  t->add_option("--lambda", tf.lambda, "Regularization weight")->capture_default_str();
  t->add_option("--variant", tf.variant, "plain, sf1 or sf2")
      ->check(CLI::IsMember({"plain", "sf1", "sf2"}))
      ->capture_default_str();
  add_sf_options(t, tf.tmax, tf.m, tf.ds, tf.de);
  t->add_option("--max-iter", tf.max_iter, "Iteration limit")->capture_default_str();
  t->add_option("--warm-start", tf.warm_start, "Sign partition JSON to start from");
  t->add_option("--report", tf.report, "Report JSON path (stdout when omitted)");
  t->add_option("--output", tf.output, "Write the fitted values as CSV");
  t->add_option("--save-partition", tf.save_partition, "Write the final sign partition JSON");
  t->add_option("--seed", tf.seed, "Accepted for uniformity; the solvers are deterministic");
  t->add_flag("--no-timing", tf.no_timing, "Zero the wall_time field so reports are byte-identical");

  GridArgs gr;
  auto* r = app.add_subcommand("grid", "Success rates of the trend filtering variants on uniform data");
  r->add_option("--sizes", gr.sizes, "Problem sizes")->capture_default_str();
  r->add_flag("--full", gr.full, "Also run n = 170000 and 330000");
  r->add_option("--repeats", gr.repeats, "Instances per size")->capture_default_str();
  r->add_option("--variants", gr.variants, "Subset of plain sf1 sf2")
      ->check(CLI::IsMember({"plain", "sf1", "sf2"}))
      ->capture_default_str();
  r->add_option("--penalties", gr.penalties, "Subset of l1pos l1")
      ->check(CLI::IsMember({"l1", "l1pos"}))
      ->capture_default_str();
  r->add_option("--orders", gr.orders, "Difference orders")->capture_default_str();
  r->add_option("--lambda", gr.lambda, "Regularization weight")->capture_default_str();
  r->add_option("--max-iter", gr.max_iter, "Iteration limit per run")->capture_default_str();
  add_sf_options(r, gr.tmax, gr.m, gr.ds, gr.de);
  r->add_option("--seed", gr.seed, "Base seed")->capture_default_str();
  r->add_option("--jobs", gr.jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  r->add_option("-o,--output", gr.output, "CSV path, - for stdout")->capture_default_str();
  r->add_flag("--no-timing", gr.no_timing, "Zero the timing column so output is byte-identical");
  r->add_flag("-q,--quiet", gr.quiet, "No progress lines on stderr");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_error;
  }

  try {
    if (*g) return run_gen(gen);
    if (*i) return run_ir(ir);
    if (*t) return run_tf(tf);
    if (*r) return run_grid_cmd(gr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_error;
  }
  return exit_error;
}
