#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "korm/errors.hpp"

namespace korm {

enum class Metric { squared_euclidean, euclidean };

inline const char* to_string(Metric m) {
  return m == Metric::squared_euclidean ? "squared-euclidean" : "euclidean";
}

inline std::optional<Metric> parse_metric(const std::string& s) {
  if (s == "squared-euclidean" || s == "squared_euclidean") return Metric::squared_euclidean;
  if (s == "euclidean") return Metric::euclidean;
  return std::nullopt;
}

// An n-dimensional stream point. All coordinates are finite reals; the
// dimension is fixed per stream.
struct Point {
  std::vector<double> coords;

  Point() = default;
  Point(std::initializer_list<double> values) : coords(values) {}
  explicit Point(std::vector<double> values) : coords(std::move(values)) {}

  std::size_t dim() const { return coords.size(); }
  double operator[](std::size_t i) const { return coords[i]; }
  bool operator==(const Point&) const = default;
};

namespace detail {

// Shared accumulation order (4-wide blocks, then a scalar tail) so that the
// facility scan and this function produce bit-identical distances.
inline double squared_dist(const double* a, const double* b, std::size_t d) {
  double acc = 0.0;
  std::size_t r = 0;
  for (; r + 4 <= d; r += 4) {
    const double d0 = a[r] - b[r];
    const double d1 = a[r + 1] - b[r + 1];
    const double d2 = a[r + 2] - b[r + 2];
    const double d3 = a[r + 3] - b[r + 3];
    acc += d0 * d0 + d1 * d1 + d2 * d2 + d3 * d3;
  }
  for (; r < d; ++r) {
    const double diff = a[r] - b[r];
    acc += diff * diff;
  }
  return acc;
}

}  // namespace detail

inline double dist(const Point& a, const Point& b, Metric metric) {
  if (a.dim() != b.dim()) {
    throw DimensionError("dist: dimension mismatch (" + std::to_string(a.dim()) +
                         " vs " + std::to_string(b.dim()) + ")");
  }
  const double acc = detail::squared_dist(a.coords.data(), b.coords.data(), a.coords.size());
  return metric == Metric::euclidean ? std::sqrt(acc) : acc;
}

// Service cost charged when a point of weight w is assigned to a facility at
// distance theta.
inline double assignment_cost(double weight, double theta) { return weight * theta; }

// A facility: a stream point promoted to a cluster representative. The weight
// counts the stream mass absorbed into it; it never decreases once created.
struct WeightedMedian {
  std::int64_t id = -1;
  Point location;
  double weight = 1.0;
  std::uint32_t outlier_score = 0;
  std::optional<std::uint64_t> tco_since_phase;
  std::uint64_t created_phase = 0;
};

// One weighted element of a phase input: either a raw stream point
// (carried_id < 0, weight 1) or a median carried over from the previous phase.
struct WeightedItem {
  Point location;
  double weight = 1.0;
  std::int64_t carried_id = -1;
  std::uint64_t created_phase = 0;
};

}  // namespace korm
