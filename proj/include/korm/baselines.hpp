#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "korm/core.hpp"
#include "korm/errors.hpp"

namespace korm {

struct DkEntry {
  std::size_t index = 0;
  double dk_value = 0.0;
};

// Full distance-to-Kth-nearest-neighbor ranking, largest first. Exact
// pairwise computation, no indexing; these baselines are deliberately the
// plain quadratic versions. Ties order by lower point index.
inline std::vector<DkEntry> dk_ranking(std::span<const Point> points, std::size_t k,
                                       Metric metric = Metric::euclidean) {
  if (k < 1) throw RangeError("dk: K must be at least 1");
  if (k >= points.size()) {
    throw RangeError("dk: K = " + std::to_string(k) + " must be smaller than the point count " +
                     std::to_string(points.size()));
  }
  std::vector<DkEntry> ranking(points.size());
  std::vector<double> dists(points.size() - 1);
  for (std::size_t i = 0; i < points.size(); ++i) {
    std::size_t idx = 0;
    for (std::size_t j = 0; j < points.size(); ++j) {
      if (j == i) continue;
      dists[idx++] = dist(points[i], points[j], metric);
    }
    std::nth_element(dists.begin(), dists.begin() + (k - 1), dists.end());
    ranking[i] = {i, dists[k - 1]};
  }
  std::sort(ranking.begin(), ranking.end(), [](const DkEntry& a, const DkEntry& b) {
    return a.dk_value > b.dk_value || (a.dk_value == b.dk_value && a.index < b.index);
  });
  return ranking;
}

inline std::vector<DkEntry> dk_outliers(std::span<const Point> points, std::size_t k,
                                        std::size_t n_top, Metric metric = Metric::euclidean) {
  if (n_top < 1) throw RangeError("dk: n_top must be at least 1");
  if (n_top > points.size()) {
    throw RangeError("dk: n_top = " + std::to_string(n_top) + " exceeds the point count " +
                     std::to_string(points.size()));
  }
  auto ranking = dk_ranking(points, k, metric);
  ranking.resize(n_top);
  return ranking;
}

// DB(p, D) nested-loop detector: a point is an outlier iff fewer than
// (1-p)(n-1) other points lie within distance D, i.e. at least fraction p of
// the others are farther than D. Literal double loop; the only shortcut is
// stopping a row once the within-D count already disqualifies it.
inline std::vector<std::size_t> db_nested_loop(std::span<const Point> points, double radius_d,
                                               double fraction_p,
                                               Metric metric = Metric::euclidean) {
  if (!(radius_d > 0.0)) throw RangeError("db: D must be positive");
  if (!(fraction_p > 0.0 && fraction_p < 1.0)) throw RangeError("db: p must lie in (0, 1)");
  std::vector<std::size_t> outliers;
  const double threshold =
      (1.0 - fraction_p) * static_cast<double>(points.size() > 0 ? points.size() - 1 : 0);
  for (std::size_t i = 0; i < points.size(); ++i) {
    std::size_t within = 0;
    bool is_outlier = true;
    for (std::size_t j = 0; j < points.size(); ++j) {
      if (j == i) continue;
      if (dist(points[i], points[j], metric) <= radius_d) {
        ++within;
        if (static_cast<double>(within) >= threshold) {
          is_outlier = false;
          break;
        }
      }
    }
    if (is_outlier) outliers.push_back(i);
  }
  return outliers;
}

}  // namespace korm
