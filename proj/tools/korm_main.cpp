// korm: streaming k-median outlier mining CLI.
//
// Subcommands:
//   run       mine a delimited dataset for real outliers
//   baseline  distance-based comparison detectors (dk, db-nl)
//   bench     timing harness over the same dataset
//   plotdata  project a finished report to 2-D plot rows

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "korm/cli.hpp"
#include "korm/version.hpp"

namespace {

void add_io_flags(CLI::App* cmd, korm::CommonIo& io, bool need_schema = true) {
  cmd->add_option("--input", io.input, "input dataset (comma-delimited text)")->required();
  if (need_schema) {
    cmd->add_option("--schema", io.schema, "schema file: optional 'header' line, then one of "
                                           "numeric|char|skip per column")
        ->required();
  }
  cmd->add_option("--output", io.output, "write to this file instead of standard output");
  cmd->add_option("--format", io.format, "report format (json|csv)")
      ->check(CLI::IsMember({"json", "csv"}));
}

struct ConfigFlags {
  std::string metric = "squared-euclidean";
  std::string log_base = "2";
  std::size_t n_estimate = 0;
  CLI::Option* n_opt = nullptr;
};

void add_config_flags(CLI::App* cmd, korm::KormConfig& cfg, ConfigFlags& flags) {
  cmd->add_option("--k", cfg.k, "lower bound on the facility count");
  cmd->add_option("--score-o", cfg.score_o, "phases of stagnation before an outlier verdict");
  cmd->add_option("--gamma", cfg.gamma, "gamma constant");
  cmd->add_option("--beta", cfg.beta, "beta constant (lower-bound growth factor)");
  cmd->add_option("--num", cfg.chunk_size_num, "chunk size (raw points per phase)");
  cmd->add_option("--seed", cfg.seed, "RNG master seed");
  cmd->add_option("--metric", flags.metric, "distance metric (squared-euclidean|euclidean)");
  cmd->add_option("--log-base", flags.log_base, "log base in the cost formulas (2|natural)");
  cmd->add_option("--invocation-factor", cfg.invocation_factor,
                  "invocations per phase = ceil(factor * log n)");
  flags.n_opt = cmd->add_option(
      "--n-estimate", flags.n_estimate,
      "stream length used in the cost formulas (defaults to the dataset size)");
}

int parse_enum_flags(korm::KormConfig& cfg, const ConfigFlags& flags, std::ostream& err) {
  if (const auto m = korm::parse_metric(flags.metric)) {
    cfg.metric = *m;
  } else {
    korm::emit_error(err, korm::RangeError("unknown metric: " + flags.metric));
    return 2;
  }
  if (const auto b = korm::parse_log_base(flags.log_base)) {
    cfg.log_base = *b;
  } else {
    korm::emit_error(err, korm::RangeError("unknown log base: " + flags.log_base));
    return 2;
  }
  if (flags.n_opt != nullptr && flags.n_opt->count() > 0) {
    cfg.stream_length_hint = flags.n_estimate;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"KORM: chunked k-median outlier mining over point streams"};
  app.set_version_flag("--version", std::string(korm::version_string));
  app.require_subcommand(1);

  korm::RunOptions run;
  ConfigFlags run_flags;
  double approx_c = 0.0;
  auto* run_cmd = app.add_subcommand("run", "mine a dataset for real outliers");
  add_io_flags(run_cmd, run.io);
  add_config_flags(run_cmd, run.cfg, run_flags);
  run_cmd->add_flag("--trace", run.trace, "include per-invocation stats in the report");
  run_cmd->add_flag("--timing", run.timing,
                    "record wall-clock seconds (makes reports non-reproducible byte-wise)");
  run_cmd->add_flag("--min-max-scale", run.min_max_scale, "min-max scale each dimension to [0,1]");
  auto* c_opt = run_cmd->add_option("--approx-c", approx_c,
                                    "approximation factor c for the secondary beta check");

  korm::BaselineOptions baseline;
  std::string baseline_metric = "euclidean";
  auto* bl_cmd = app.add_subcommand("baseline", "run a distance-based comparison detector");
  add_io_flags(bl_cmd, baseline.io);
  bl_cmd->add_option("--method", baseline.method, "dk | db-nl")->required();
  bl_cmd->add_option("--knn", baseline.params.knn, "K for the K-th nearest neighbor ranking");
  bl_cmd->add_option("--top-n", baseline.params.top_n, "how many ranked outliers to report");
  bl_cmd->add_option("--radius", baseline.params.radius, "D for the DB(p,D) nested loop");
  bl_cmd->add_option("--fraction", baseline.params.fraction, "p for the DB(p,D) nested loop");
  bl_cmd->add_option("--metric", baseline_metric, "distance metric");
  bl_cmd->add_flag("--min-max-scale", baseline.min_max_scale, "min-max scale before running");

  korm::BenchOptions bench;
  ConfigFlags bench_flags;
  std::string methods_csv = "korm,dk,db-nl";
  auto* bench_cmd = app.add_subcommand("bench", "time korm against the baselines");
  add_io_flags(bench_cmd, bench.io);
  add_config_flags(bench_cmd, bench.cfg, bench_flags);
  bench_cmd->add_option("--methods", methods_csv, "comma-separated subset of korm,dk,db-nl");
  bench_cmd->add_option("--reps", bench.reps, "repetitions per method");
  bench_cmd->add_option("--knn", bench.params.knn, "K for dk");
  bench_cmd->add_option("--top-n", bench.params.top_n, "n_top for dk");
  bench_cmd->add_option("--radius", bench.params.radius, "D for db-nl");
  bench_cmd->add_option("--fraction", bench.params.fraction, "p for db-nl");

  korm::PlotdataOptions plot;
  std::string dims = "0,1";
  auto* plot_cmd = app.add_subcommand("plotdata", "emit plot rows from a finished report");
  plot_cmd->add_option("--report", plot.report_path, "report JSON produced by `run`")->required();
  plot_cmd->add_option("--dims", dims, "two 0-based coordinate indices, e.g. 2,3");
  plot_cmd->add_option("--output", plot.output, "write CSV here instead of standard output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 2;
  }

  if (run_cmd->parsed()) {
    if (const int rc = parse_enum_flags(run.cfg, run_flags, std::cerr)) return rc;
    if (c_opt->count() > 0) run.approx_c = approx_c;
    return korm::cmd_run(run, std::cout, std::cerr);
  }
  if (bl_cmd->parsed()) {
    if (const auto m = korm::parse_metric(baseline_metric)) {
      baseline.params.metric = *m;
    } else {
      korm::emit_error(std::cerr, korm::RangeError("unknown metric: " + baseline_metric));
      return 2;
    }
    return korm::cmd_baseline(baseline, std::cout, std::cerr);
  }
  if (bench_cmd->parsed()) {
    if (const int rc = parse_enum_flags(bench.cfg, bench_flags, std::cerr)) return rc;
    bench.methods.clear();
    std::size_t start = 0;
    while (start <= methods_csv.size()) {
      const std::size_t comma = methods_csv.find(',', start);
      const std::string m = methods_csv.substr(
          start, comma == std::string::npos ? std::string::npos : comma - start);
      if (!m.empty()) bench.methods.push_back(m);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    return korm::cmd_bench(bench, std::cout, std::cerr);
  }
  if (plot_cmd->parsed()) {
    const std::size_t comma = dims.find(',');
    try {
      if (comma == std::string::npos) throw std::invalid_argument("missing comma");
      plot.dim_x = std::stoul(dims.substr(0, comma));
      plot.dim_y = std::stoul(dims.substr(comma + 1));
    } catch (const std::exception&) {
      korm::emit_error(std::cerr, korm::RangeError("--dims expects two indices like 2,3"));
      return 2;
    }
    return korm::cmd_plotdata(plot, std::cout, std::cerr);
  }
  return 1;
}
