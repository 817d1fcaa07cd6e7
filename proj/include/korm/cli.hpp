#pragma once

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "korm/baselines.hpp"
#include "korm/bench.hpp"
#include "korm/config.hpp"
#include "korm/errors.hpp"
#include "korm/ingest.hpp"
#include "korm/korm.hpp"
#include "korm/report.hpp"

namespace korm {

// Exit codes: 0 success, 2 configuration error, 3 data error, 4 degenerate
// run. Anything unexpected maps to 1.
inline int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::range:
    case ErrorKind::constraint:
      return 2;
    case ErrorKind::parse:
    case ErrorKind::encoding:
    case ErrorKind::shape:
    case ErrorKind::dimension:
    case ErrorKind::insufficient_data:
    case ErrorKind::data:
      return 3;
    case ErrorKind::degenerate_lower_bound:
    case ErrorKind::progress:
      return 4;
  }
  return 1;
}

inline void emit_error(std::ostream& err, const Error& e) {
  json obj;
  json inner;
  inner["kind"] = to_string(e.kind());
  inner["message"] = e.what();
  if (const auto* c = dynamic_cast<const ConstraintError*>(&e)) {
    inner["lhs"] = c->lhs;
    inner["rhs"] = c->rhs;
  }
  if (const auto* p = dynamic_cast<const ParseError*>(&e)) {
    inner["row"] = p->row;
    inner["column"] = p->column;
  }
  if (const auto* p = dynamic_cast<const EncodingError*>(&e)) {
    inner["row"] = p->row;
    inner["column"] = p->column;
  }
  obj["error"] = inner;
  err << canonical_dump(obj);
}

struct CommonIo {
  std::string input;
  std::string schema;
  std::string output;        // empty: standard output
  std::string format = "json";
};

namespace detail {

inline void write_output(const CommonIo& io, std::ostream& out, const std::string& text) {
  if (io.output.empty()) {
    out << text;
    return;
  }
  std::ofstream f(io.output, std::ios::binary);
  if (!f) throw DataError("cannot write output file: " + io.output);
  f << text;
}

struct LoadedDataset {
  std::vector<Point> points;
  DatasetInfo info;
};

inline LoadedDataset load_for_cli(const CommonIo& io, bool min_max) {
  const DatasetSchema schema = parse_schema_file(io.schema);
  const std::string bytes = read_file(io.input);
  std::istringstream stream(bytes);
  LoadedDataset ds;
  ds.points = parse_delimited(stream, schema);
  if (min_max) min_max_scale(ds.points);
  ds.info.path = io.input;
  ds.info.digest = digest_string(bytes);
  ds.info.instances = ds.points.size();
  ds.info.dimension = ds.points.empty() ? 0 : ds.points.front().dim();
  return ds;
}

}  // namespace detail

struct RunOptions {
  CommonIo io;
  KormConfig cfg;
  bool trace = false;
  bool timing = false;
  bool min_max_scale = false;
  std::optional<double> approx_c;  // enables the secondary beta check
};

inline int cmd_run(const RunOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    const ValidatedConfig cfg = validate_config(opt.cfg, opt.approx_c);
    for (const auto& w : cfg.warnings()) err << "warning: " << w << "\n";
    const auto ds = detail::load_for_cli(opt.io, opt.min_max_scale);

    const auto t0 = std::chrono::steady_clock::now();
    const RunResult run = korm_run(ds.points, cfg);
    const auto t1 = std::chrono::steady_clock::now();

    ReportOptions ropts;
    ropts.trace = opt.trace;
    ropts.timing = opt.timing;
    ropts.wall_seconds = std::chrono::duration<double>(t1 - t0).count();
    const json report = build_report(run, cfg, ds.info, ropts);
    detail::write_output(opt.io, out,
                         opt.io.format == "csv" ? report_phases_csv(report)
                                                : canonical_dump(report));
    return 0;
  } catch (const Error& e) {
    emit_error(err, e);
    return exit_code_for(e.kind());
  }
}

struct BaselineOptions {
  CommonIo io;
  std::string method = "dk";  // "dk" or "db-nl"
  BaselineParams params;
  bool min_max_scale = false;
};

inline int cmd_baseline(const BaselineOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    const auto ds = detail::load_for_cli(opt.io, opt.min_max_scale);
    json report;
    report["schema_version"] = 1;
    json tool;
    tool["name"] = "korm";
    tool["version"] = std::string(version_string);
    report["tool"] = tool;
    json dsj;
    dsj["path"] = ds.info.path;
    dsj["digest"] = ds.info.digest;
    dsj["instances"] = ds.info.instances;
    dsj["dimension"] = ds.info.dimension;
    report["dataset"] = dsj;

    json bl;
    bl["method"] = opt.method;
    bl["metric"] = to_string(opt.params.metric);
    if (opt.method == "dk") {
      bl["knn"] = opt.params.knn;
      bl["top_n"] = opt.params.top_n;
      report["baseline"] = bl;
      json ranking = json::array();
      for (const auto& e : dk_outliers(ds.points, opt.params.knn, opt.params.top_n,
                                       opt.params.metric)) {
        json ej;
        ej["index"] = e.index;
        ej["dk_value"] = e.dk_value;
        ranking.push_back(ej);
      }
      report["ranking"] = ranking;
    } else if (opt.method == "db-nl") {
      bl["radius"] = opt.params.radius;
      bl["fraction"] = opt.params.fraction;
      report["baseline"] = bl;
      report["outliers"] =
          db_nested_loop(ds.points, opt.params.radius, opt.params.fraction, opt.params.metric);
    } else {
      throw RangeError("baseline: unknown method '" + opt.method + "'");
    }
    detail::write_output(opt.io, out, canonical_dump(report));
    return 0;
  } catch (const Error& e) {
    emit_error(err, e);
    return exit_code_for(e.kind());
  }
}

struct BenchOptions {
  CommonIo io;
  std::vector<std::string> methods = {"korm", "dk", "db-nl"};
  std::size_t reps = 5;
  KormConfig cfg;
  BaselineParams params;
  bool min_max_scale = false;
};

inline int cmd_bench(const BenchOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    const ValidatedConfig cfg = validate_config(opt.cfg, std::nullopt);
    const auto ds = detail::load_for_cli(opt.io, opt.min_max_scale);
    const auto records = run_bench(ds.points, opt.methods, opt.reps, cfg, opt.params);
    detail::write_output(opt.io, out, bench_csv(records));
    return 0;
  } catch (const Error& e) {
    emit_error(err, e);
    return exit_code_for(e.kind());
  }
}

struct PlotdataOptions {
  std::string report_path;
  std::size_t dim_x = 0;
  std::size_t dim_y = 1;
  std::string output;
};

inline int cmd_plotdata(const PlotdataOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    json report;
    try {
      report = json::parse(read_file(opt.report_path));
    } catch (const json::parse_error& pe) {
      throw DataError("report file is not valid JSON: " + std::string(pe.what()));
    }
    if (!report.contains("final_medians") || !report.contains("real_outliers") ||
        !report.contains("dataset")) {
      throw DataError("report file is missing the median/outlier sections");
    }
    const std::string csv = plotdata_csv(report, opt.dim_x, opt.dim_y);
    CommonIo io;
    io.output = opt.output;
    detail::write_output(io, out, csv);
    return 0;
  } catch (const Error& e) {
    emit_error(err, e);
    return exit_code_for(e.kind());
  }
}

}  // namespace korm
