#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "korm/core.hpp"
#include "korm/errors.hpp"
#include "korm/rng.hpp"

// Deterministic synthetic datasets. The two tabular generators produce
// fixed-shape stand-ins for the UCI Abalone (4177 x 9, mixed attributes) and
// Teaching Assistant Evaluation (151 x 6) tables: dense quantized clusters
// per group plus, for the abalone-like table, a handful of rows with
// decimal-slip magnitudes in the weight column that act as genuine isolated
// anomalies. Everything is a pure function of the seed.

namespace korm::synth {

inline double gauss(RngStream& rng) {
  const double u1 = 1.0 - rng.next_unit();
  const double u2 = rng.next_unit();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

struct SynthTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

inline std::string to_csv(const SynthTable& table) {
  std::string out;
  auto join = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out.push_back(',');
      out += cells[i];
    }
    out.push_back('\n');
  };
  if (!table.header.empty()) join(table.header);
  for (const auto& row : table.rows) join(row);
  return out;
}

inline void write_csv_file(const SynthTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  out << to_csv(table);
}

inline constexpr std::string_view abalone_schema_text =
    "header\nchar\nnumeric\nnumeric\nnumeric\nnumeric\nnumeric\nnumeric\nnumeric\nskip\n";

inline constexpr std::string_view tae_schema_text =
    "header\nnumeric\nnumeric\nnumeric\nnumeric\nnumeric\nskip\n";

namespace detail {

inline double quant(double x) {
  const double q = std::round(x * 200.0) / 200.0;  // 0.005 steps
  return q < 0.005 ? 0.005 : q;
}

inline std::string fmt3(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", x);
  return buf;
}

struct AbaloneMode {
  char sex;
  double len, dia, hei, who, shu, vis, she;
  double ring_base;
};

}  // namespace detail

// 4177 rows: sex, 7 size/weight measurements quantized to 0.005, rings.
// Rows cluster into 42 tight per-sex modes; eight rows carry whole weights an
// order of magnitude out of range (with matching extreme heights), far from
// everything else and from each other.
inline SynthTable make_abalone_like(std::uint64_t seed = 7) {
  using detail::fmt3;
  using detail::quant;

  SynthTable table;
  table.header = {"sex",     "length",  "diameter", "height", "whole",
                  "shucked", "viscera", "shell",    "rings"};
  constexpr std::size_t kRows = 4177;

  RngStream mode_rng(seed, 0);
  std::vector<detail::AbaloneMode> modes;
  const struct {
    char sex;
    double lo, hi;
  } ranges[3] = {{'M', 0.33, 0.66}, {'F', 0.35, 0.68}, {'I', 0.25, 0.48}};
  for (const auto& r : ranges) {
    for (int m = 0; m < 14; ++m) {
      const double frac = (m + 0.5) / 14.0;
      const double len = r.lo + (r.hi - r.lo) * frac + 0.008 * (mode_rng.next_unit() - 0.5);
      detail::AbaloneMode mode;
      mode.sex = r.sex;
      mode.len = len;
      mode.dia = 0.80 * len + 0.01 * (mode_rng.next_unit() - 0.5);
      mode.hei = 0.28 * len * (r.sex == 'I' ? 0.92 : 1.0) + 0.008 * (mode_rng.next_unit() - 0.5);
      mode.who = 1.9 * std::pow(len, 2.7);
      mode.shu = 0.43 * mode.who;
      mode.vis = 0.22 * mode.who;
      mode.she = 0.27 * mode.who;
      mode.ring_base = 3.5 + 16.0 * len;
      modes.push_back(mode);
    }
  }

  // Three hand-picked lead rows keep the closest pair of the first k+1 points
  // at a moderate, known separation for small k.
  const std::vector<std::vector<std::string>> lead = {
      {"M", "0.455", "0.365", "0.125", "0.510", "0.225", "0.100", "0.150", "9"},
      {"M", "0.250", "0.190", "0.060", "0.130", "0.055", "0.030", "0.045", "5"},
      {"M", "0.650", "0.510", "0.165", "1.220", "0.530", "0.265", "0.350", "12"},
  };

  // Anomalous rows: whole weight shifted by whole decades, height out of any
  // plausible range. Spaced so no two are near each other either.
  struct Planted {
    std::size_t index;
    double whole;
  };
  const std::array<Planted, 8> planted = {{{45, 6.0},
                                           {320, 10.0},
                                           {580, 14.0},
                                           {777, 18.0},
                                           {940, 22.0},
                                           {1404, 26.0},
                                           {3002, 30.0},
                                           {3907, 34.0}}};
  const char planted_sex[3] = {'M', 'F', 'I'};

  RngStream row_rng(seed, 1);
  table.rows.reserve(kRows);
  std::size_t planted_next = 0;
  for (std::size_t i = 0; i < kRows; ++i) {
    if (i < lead.size()) {
      table.rows.push_back(lead[i]);
      continue;
    }
    if (planted_next < planted.size() && i == planted[planted_next].index) {
      const double who = planted[planted_next].whole;
      const double hei = 1.0 + 0.04 * static_cast<double>(planted_next);
      std::vector<std::string> row = {
          std::string(1, planted_sex[planted_next % 3]),
          fmt3(0.620 + 0.010 * static_cast<double>(planted_next)),
          fmt3(0.500),
          fmt3(hei),
          fmt3(who),
          fmt3(0.45 * who),
          fmt3(0.22 * who),
          fmt3(0.27 * who),
          "15",
      };
      table.rows.push_back(std::move(row));
      ++planted_next;
      continue;
    }
    const double su = row_rng.next_unit();
    const std::size_t sex_idx = su < 0.366 ? 0 : (su < 0.679 ? 1 : 2);
    const auto& mode = modes[sex_idx * 14 + row_rng.next_below(14)];
    const double sigma = 0.003;
    const double len = quant(mode.len + sigma * gauss(row_rng));
    const double dia = quant(mode.dia + sigma * gauss(row_rng));
    const double hei = quant(mode.hei + sigma * gauss(row_rng));
    const double who = quant(mode.who + sigma * gauss(row_rng));
    const double shu = quant(mode.shu + sigma * gauss(row_rng));
    const double vis = quant(mode.vis + sigma * gauss(row_rng));
    const double she = quant(mode.she + sigma * gauss(row_rng));
    const int rings = std::clamp(
        static_cast<int>(std::lround(mode.ring_base + 1.2 * gauss(row_rng))), 1, 29);
    table.rows.push_back({std::string(1, mode.sex), fmt3(len), fmt3(dia), fmt3(hei), fmt3(who),
                          fmt3(shu), fmt3(vis), fmt3(she), std::to_string(rings)});
  }
  return table;
}

// 151 rows: five small integer attributes plus a class label column. Three
// balanced groups with overlapping attribute ranges; nothing isolated.
inline SynthTable make_tae_like(std::uint64_t seed = 3) {
  SynthTable table;
  table.header = {"native", "instructor", "course", "semester", "size", "class"};
  RngStream rng(seed, 0);
  constexpr std::size_t kRows = 151;
  table.rows.reserve(kRows);
  for (std::size_t i = 0; i < kRows; ++i) {
    const int klass = static_cast<int>(i % 3) + 1;
    const int native = rng.next_unit() < 0.2 ? 1 : 2;
    const int instructor = 1 + static_cast<int>(rng.next_below(25));
    const int course = 1 + static_cast<int>(rng.next_below(26));
    const int semester = rng.next_unit() < 0.3 ? 1 : 2;
    const int size = 11 + static_cast<int>(rng.next_below(50));
    table.rows.push_back({std::to_string(native), std::to_string(instructor),
                          std::to_string(course), std::to_string(semester), std::to_string(size),
                          std::to_string(klass)});
  }
  return table;
}

// Three Gaussian blobs (sigma 1) plus one point 50 sigma away from every blob
// center, inserted early in the stream so its outlier window fits before the
// stream ends. Returns the planted point's stream position.
inline std::vector<Point> make_planted_instance(std::uint64_t seed, std::size_t* planted_index,
                                                std::size_t per_blob = 100) {
  RngStream rng(seed, 0);
  const double centers[3][2] = {{0.0, 0.0}, {40.0, 0.0}, {0.0, 40.0}};
  std::vector<Point> points;
  points.reserve(3 * per_blob + 1);
  for (int b = 0; b < 3; ++b) {
    for (std::size_t i = 0; i < per_blob; ++i) {
      points.push_back({centers[b][0] + gauss(rng), centers[b][1] + gauss(rng)});
    }
  }
  // Fisher-Yates with the same stream keeps the instance a function of seed.
  for (std::size_t i = points.size() - 1; i > 0; --i) {
    std::swap(points[i], points[rng.next_below(i + 1)]);
  }
  const std::size_t at = std::min<std::size_t>(25, points.size());
  points.insert(points.begin() + at, Point{-36.0, -36.0});
  if (planted_index) *planted_index = at;
  return points;
}

// Generic mixture stream for fuzzing: `modes` tight Gaussian clusters in
// [0, span]^dim with cluster scale `sigma`.
inline std::vector<Point> make_mixture(std::uint64_t seed, std::size_t count, std::size_t dim,
                                       std::size_t modes, double span = 10.0, double sigma = 0.05) {
  RngStream rng(seed, 0);
  std::vector<std::vector<double>> centers(modes, std::vector<double>(dim));
  for (auto& c : centers) {
    for (auto& x : c) x = span * rng.next_unit();
  }
  std::vector<Point> points;
  points.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const auto& c = centers[rng.next_below(modes)];
    Point p;
    p.coords.resize(dim);
    for (std::size_t d = 0; d < dim; ++d) p.coords[d] = c[d] + sigma * gauss(rng);
    points.push_back(std::move(p));
  }
  return points;
}

}  // namespace korm::synth
