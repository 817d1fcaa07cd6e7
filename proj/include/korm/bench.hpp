#pragma once

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <string>
#include <vector>

#include "korm/baselines.hpp"
#include "korm/config.hpp"
#include "korm/core.hpp"
#include "korm/errors.hpp"
#include "korm/korm.hpp"

namespace korm {

// One timed execution: method, dataset size, parameter string, repetition
// ("0".."r-1", or "median" for the summary row), wall and CPU seconds of the
// algorithm section only (no file loading), and the peak number of points the
// method keeps resident.
struct BenchRecord {
  std::string method;
  std::size_t n = 0;
  std::string params;
  std::string rep;
  double wall_seconds = 0.0;
  double cpu_seconds = 0.0;
  std::size_t peak_retained = 0;
};

struct BaselineParams {
  std::size_t knn = 3;
  std::size_t top_n = 7;
  double radius = 0.45;
  double fraction = 0.95;
  Metric metric = Metric::euclidean;
};

namespace detail {

struct Timed {
  double wall = 0.0;
  double cpu = 0.0;
};

template <typename F>
Timed time_call(F&& fn) {
  const auto w0 = std::chrono::steady_clock::now();
  const std::clock_t c0 = std::clock();
  fn();
  const std::clock_t c1 = std::clock();
  const auto w1 = std::chrono::steady_clock::now();
  Timed t;
  t.wall = std::chrono::duration<double>(w1 - w0).count();
  t.cpu = static_cast<double>(c1 - c0) / CLOCKS_PER_SEC;
  // Clamp to the clock granularity floor so a sub-tick run still records a
  // positive duration.
  t.wall = std::max(t.wall, 1e-9);
  t.cpu = std::max(t.cpu, 1e-9);
  return t;
}

inline double median_of(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace detail

// Runs each requested method `reps` times over the already-loaded points.
// Methods never interleave: all repetitions of one method finish before the
// next method starts. Emits one record per repetition plus a median summary
// row per method.
inline std::vector<BenchRecord> run_bench(const std::vector<Point>& points,
                                          const std::vector<std::string>& methods,
                                          std::size_t reps, const ValidatedConfig& cfg,
                                          const BaselineParams& baseline) {
  if (reps < 1) throw RangeError("bench: reps must be at least 1");
  std::vector<BenchRecord> records;
  char params[128];
  for (const auto& method : methods) {
    std::vector<double> walls;
    std::vector<double> cpus;
    std::size_t peak = 0;
    std::string param_str;
    for (std::size_t rep = 0; rep < reps; ++rep) {
      detail::Timed t;
      if (method == "korm") {
        const KormConfig& c = cfg.values();
        std::snprintf(params, sizeof(params), "k=%zu;O=%u;gamma=%g;beta=%g;num=%zu;seed=%llu", c.k,
                      c.score_o, c.gamma, c.beta, c.chunk_size_num,
                      static_cast<unsigned long long>(c.seed));
        RunResult run;
        t = detail::time_call([&] { run = korm_run(points, cfg); });
        peak = std::max(peak, run.peak_retained);
      } else if (method == "dk") {
        std::snprintf(params, sizeof(params), "K=%zu;n_top=%zu", baseline.knn, baseline.top_n);
        t = detail::time_call(
            [&] { dk_outliers(points, baseline.knn, baseline.top_n, baseline.metric); });
        peak = points.size();
      } else if (method == "db-nl") {
        std::snprintf(params, sizeof(params), "D=%g;p=%g", baseline.radius, baseline.fraction);
        t = detail::time_call(
            [&] { db_nested_loop(points, baseline.radius, baseline.fraction, baseline.metric); });
        peak = points.size();
      } else {
        throw RangeError("bench: unknown method '" + method + "'");
      }
      param_str = params;
      walls.push_back(t.wall);
      cpus.push_back(t.cpu);
      records.push_back({method, points.size(), param_str, std::to_string(rep), t.wall, t.cpu, peak});
    }
    records.push_back({method, points.size(), param_str, "median", detail::median_of(walls),
                       detail::median_of(cpus), peak});
  }
  return records;
}

inline std::string bench_csv(const std::vector<BenchRecord>& records) {
  std::string out = "method,n,params,rep,wall_seconds,cpu_seconds,peak_retained_points\n";
  char buf[64];
  for (const auto& r : records) {
    out += r.method + "," + std::to_string(r.n) + "," + r.params + "," + r.rep + ",";
    std::snprintf(buf, sizeof(buf), "%.9f,%.9f,", r.wall_seconds, r.cpu_seconds);
    out += buf;
    out += std::to_string(r.peak_retained) + "\n";
  }
  return out;
}

}  // namespace korm
