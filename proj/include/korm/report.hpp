#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "korm/config.hpp"
#include "korm/errors.hpp"
#include "korm/korm.hpp"
#include "korm/rng.hpp"
#include "korm/version.hpp"

namespace korm {

using json = nlohmann::ordered_json;

// --- Dataset digest ---------------------------------------------------------

inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string digest_string(std::string_view bytes) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx",
                static_cast<unsigned long long>(fnv1a64(bytes)));
  return buf;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// --- Canonical serializer ---------------------------------------------------

namespace detail {

inline void canonical_number(std::string& out, const json& v) {
  if (v.is_number_integer()) {
    out += std::to_string(v.get<std::int64_t>());
  } else if (v.is_number_unsigned()) {
    out += std::to_string(v.get<std::uint64_t>());
  } else {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v.get<double>());
    out += buf;
  }
}

inline void canonical_value(std::string& out, const json& v, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string pad_in(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (v.type()) {
    case json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, value] : v.items()) {
        if (!first) out += ",\n";
        first = false;
        out += pad_in;
        out += json(key).dump();
        out += ": ";
        canonical_value(out, value, indent + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    case json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      bool first = true;
      for (const auto& item : v) {
        if (!first) out += ",\n";
        first = false;
        out += pad_in;
        canonical_value(out, item, indent + 1);
      }
      out += "\n" + pad + "]";
      return;
    }
    case json::value_t::string:
      out += v.dump();
      return;
    case json::value_t::boolean:
      out += v.get<bool>() ? "true" : "false";
      return;
    case json::value_t::null:
      out += "null";
      return;
    default:
      canonical_number(out, v);
      return;
  }
}

}  // namespace detail

// Canonical text form: insertion-ordered keys, two-space indent, LF line
// ends, and doubles printed with 17 significant digits so that
// emit -> parse -> emit is byte-identical.
inline std::string canonical_dump(const json& v) {
  std::string out;
  detail::canonical_value(out, v, 0);
  out += "\n";
  return out;
}

// --- Report assembly --------------------------------------------------------

struct DatasetInfo {
  std::string path;
  std::string digest;
  std::size_t instances = 0;
  std::size_t dimension = 0;
};

struct ReportOptions {
  bool trace = false;        // include per-invocation stats in phase records
  bool timing = false;       // include wall-clock (breaks byte determinism)
  double wall_seconds = 0.0;
};

inline void verify_report(const json& report);

inline json median_json(const WeightedMedian& m) {
  json j;
  j["id"] = m.id;
  j["location"] = m.location.coords;
  j["weight"] = m.weight;
  j["created_phase"] = m.created_phase;
  return j;
}

inline json build_report(const RunResult& run, const ValidatedConfig& cfg,
                         const DatasetInfo& dataset, const ReportOptions& opts = {}) {
  const KormConfig& c = cfg.values();
  json report;
  report["schema_version"] = 1;

  json tool;
  tool["name"] = "korm";
  tool["version"] = std::string(version_string);
  tool["rng"] = std::string(RngStream::id);
  report["tool"] = tool;

  json ds;
  ds["path"] = dataset.path;
  ds["digest"] = dataset.digest;
  ds["instances"] = dataset.instances;
  ds["dimension"] = dataset.dimension;
  report["dataset"] = ds;

  json config;
  config["k"] = c.k;
  config["score_o"] = c.score_o;
  config["gamma"] = c.gamma;
  config["beta"] = c.beta;
  config["num"] = c.chunk_size_num;
  config["seed"] = c.seed;
  config["metric"] = to_string(c.metric);
  config["log_base"] = to_string(c.log_base);
  config["invocation_factor"] = c.invocation_factor;
  config["n"] = run.n;
  report["config"] = config;

  double sum_service = 0.0;
  double sum_solution = 0.0;
  json phases = json::array();
  for (const auto& ph : run.phases) {
    json p;
    p["j"] = ph.j;
    p["lower_bound"] = ph.lower_bound;
    p["facility_price"] = ph.facility_price;
    p["wm_count"] = ph.wm_count;
    p["solution_cost"] = ph.solution_cost;
    p["service_cost"] = ph.service_cost;
    p["points_read"] = ph.points_read;
    p["halt"] = to_string(ph.halt);
    json stagnant = json::array();
    for (const auto& [id, score] : ph.tco_stagnant) {
      stagnant.push_back(json{{"id", id}, {"score", score}});
    }
    p["tco_stagnant"] = stagnant;
    p["tco_dropped"] = ph.tco_dropped;
    json verdicts = json::array();
    for (const auto& v : ph.verdicts) {
      json vj;
      vj["id"] = v.median.id;
      vj["verdict"] = to_string(v.verdict);
      vj["score"] = v.score;
      verdicts.push_back(vj);
    }
    p["verdicts"] = verdicts;
    if (opts.trace) {
      json invocations = json::array();
      for (const auto& inv : ph.invocations) {
        json ij;
        ij["consumed"] = inv.consumed;
        ij["cost"] = inv.total_cost;
        ij["facilities"] = inv.facilities;
        ij["halt"] = to_string(inv.halt);
        invocations.push_back(ij);
      }
      p["invocations"] = invocations;
    }
    phases.push_back(p);
    sum_service += ph.service_cost;
    sum_solution += ph.solution_cost;
  }
  report["phases"] = phases;

  json medians = json::array();
  for (const auto& m : run.medians) {
    json mj = median_json(m);
    mj["role"] = run.cleared_ids.contains(m.id) ? "inlier-cleared" : "median";
    medians.push_back(mj);
  }
  report["final_medians"] = medians;

  json outliers = json::array();
  for (const auto& v : run.real_outliers) {
    json oj = median_json(v.median);
    oj["decided_phase"] = v.decided_phase;
    outliers.push_back(oj);
  }
  report["real_outliers"] = outliers;

  json agg;
  agg["phases"] = run.phases.size();
  agg["points_read"] = run.points_read_total;
  agg["real_outliers"] = run.real_outliers.size();
  agg["final_medians"] = run.medians.size();
  agg["sum_squared_distance"] = sum_service;
  agg["total_solution_cost"] = sum_solution;
  agg["peak_retained_points"] = run.peak_retained;
  agg["retained_bound"] = run.retained_bound;
  if (opts.timing) agg["wall_clock_seconds"] = opts.wall_seconds;
  report["aggregates"] = agg;

  verify_report(report);
  return report;
}

// Internal consistency: the aggregates must be recomputable from the phase
// records, and every declared real outlier must appear in exactly one phase's
// verdict list.
inline void verify_report(const json& report) {
  double service = 0.0;
  double solution = 0.0;
  std::size_t read = 0;
  std::map<std::int64_t, int> seen;
  for (const auto& ph : report.at("phases")) {
    service += ph.at("service_cost").get<double>();
    solution += ph.at("solution_cost").get<double>();
    read += ph.at("points_read").get<std::size_t>();
    for (const auto& v : ph.at("verdicts")) {
      if (v.at("verdict").get<std::string>() == "real_outlier") {
        seen[v.at("id").get<std::int64_t>()] += 1;
      }
    }
  }
  const auto& agg = report.at("aggregates");
  auto close = [](double a, double b) {
    return std::abs(a - b) <= 1e-9 * std::max({std::abs(a), std::abs(b), 1.0});
  };
  if (!close(service, agg.at("sum_squared_distance").get<double>()) ||
      !close(solution, agg.at("total_solution_cost").get<double>()) ||
      read != agg.at("points_read").get<std::size_t>()) {
    throw DataError("report aggregates do not match the per-phase records");
  }
  for (const auto& o : report.at("real_outliers")) {
    const auto id = o.at("id").get<std::int64_t>();
    if (seen[id] != 1) {
      throw DataError("real outlier " + std::to_string(id) +
                      " does not appear in exactly one phase verdict list");
    }
  }
}

// --- CSV views ---------------------------------------------------------------

// Flattens the per-phase records; one row per phase.
inline std::string report_phases_csv(const json& report) {
  std::string out =
      "j,lower_bound,facility_price,wm_count,solution_cost,service_cost,points_read,halt,"
      "tco_stagnant,tco_dropped,real_outliers,inliers_cleared\n";
  char buf[64];
  auto num = [&buf](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  for (const auto& ph : report.at("phases")) {
    std::size_t reals = 0;
    std::size_t cleared = 0;
    for (const auto& v : ph.at("verdicts")) {
      if (v.at("verdict").get<std::string>() == "real_outlier") {
        ++reals;
      } else {
        ++cleared;
      }
    }
    out += std::to_string(ph.at("j").get<std::uint64_t>()) + "," +
           num(ph.at("lower_bound").get<double>()) + "," +
           num(ph.at("facility_price").get<double>()) + "," +
           std::to_string(ph.at("wm_count").get<std::size_t>()) + "," +
           num(ph.at("solution_cost").get<double>()) + "," +
           num(ph.at("service_cost").get<double>()) + "," +
           std::to_string(ph.at("points_read").get<std::size_t>()) + "," +
           ph.at("halt").get<std::string>() + "," +
           std::to_string(ph.at("tco_stagnant").size()) + "," +
           std::to_string(ph.at("tco_dropped").size()) + "," + std::to_string(reals) + "," +
           std::to_string(cleared) + "\n";
  }
  return out;
}

// Two chosen coordinates of every final median and real outlier, with its
// lifecycle role, for external plotting.
inline std::string plotdata_csv(const json& report, std::size_t dim_x, std::size_t dim_y) {
  const std::size_t d = report.at("dataset").at("dimension").get<std::size_t>();
  if (dim_x >= d || dim_y >= d) {
    throw RangeError("plot dims (" + std::to_string(dim_x) + "," + std::to_string(dim_y) +
                     ") out of range for dimension " + std::to_string(d));
  }
  std::string out = "x,y,role,weight\n";
  char buf[64];
  auto num = [&buf](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  auto emit = [&](const json& entry, const std::string& role) {
    const auto& loc = entry.at("location");
    out += num(loc.at(dim_x).get<double>()) + "," + num(loc.at(dim_y).get<double>()) + "," + role +
           "," + num(entry.at("weight").get<double>()) + "\n";
  };
  for (const auto& m : report.at("final_medians")) {
    emit(m, m.at("role").get<std::string>());
  }
  for (const auto& o : report.at("real_outliers")) {
    emit(o, "real_outlier");
  }
  return out;
}

}  // namespace korm
